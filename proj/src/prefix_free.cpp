#include "pred/prefix_free.hpp"

#include "pred/errors.hpp"

namespace pred {

bool is_prefix_free(const std::set<BitStr>& members) {
    // In lexicographic order a prefix immediately precedes its least
    // extension, so checking adjacent pairs suffices.
    const BitStr* prev = nullptr;
    for (const BitStr& x : members) {
        if (prev && prev->is_proper_prefix_of(x)) return false;
        prev = &x;
    }
    return true;
}

PrefixFreeSet PrefixFreeSet::from(std::set<BitStr> members) {
    if (!is_prefix_free(members))
        throw PreconditionError("set is not prefix-free");
    return PrefixFreeSet(std::move(members));
}

Ratio PrefixFreeSet::sigma() const {
    Ratio total;
    for (const BitStr& x : members_)
        total += Ratio::pow2(-static_cast<long>(x.size()));
    return total;
}

Ratio sigma(const PrefixFreeSet& s) { return s.sigma(); }

}  // namespace pred
