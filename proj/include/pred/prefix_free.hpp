#pragma once

#include <set>
#include <vector>

#include "pred/bitstr.hpp"
#include "pred/ratio.hpp"

namespace pred {

// True iff no member is a proper prefix of another member.
bool is_prefix_free(const std::set<BitStr>& members);

// Finite set of binary strings, none a proper prefix of another.
class PrefixFreeSet {
public:
    PrefixFreeSet() = default;

    // Throws PreconditionError if the set is not prefix-free.
    static PrefixFreeSet from(std::set<BitStr> members);

    const std::set<BitStr>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool contains(const BitStr& x) const { return members_.count(x) > 0; }

    // sum of 2^(-|x|) over the members; the uniform measure of the
    // union of the corresponding intervals. Always <= 1.
    Ratio sigma() const;

private:
    explicit PrefixFreeSet(std::set<BitStr> members) : members_(std::move(members)) {}
    std::set<BitStr> members_;
};

// sigma of an arbitrary collection already known to be prefix-free.
Ratio sigma(const PrefixFreeSet& s);

}  // namespace pred
