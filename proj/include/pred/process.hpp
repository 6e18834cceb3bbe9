#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "pred/dyadic.hpp"
#include "pred/predictor.hpp"
#include "pred/prefix_free.hpp"

namespace pred {

using ProcessPair = std::pair<BitStr, BitStr>;  // input -> output

// Single-consumer generator extending a process table.
class ProcessEnumerator {
public:
    virtual ~ProcessEnumerator() = default;
    virtual std::optional<ProcessPair> next() = 0;
};

// A monotone partial map on binary strings: extensions of inputs map to
// extensions of outputs. Held as a finite table (in insertion order)
// plus an optional enumerator producing further pairs.
class MonotoneProcess {
public:
    using EnumeratorFactory = std::function<std::unique_ptr<ProcessEnumerator>()>;

    MonotoneProcess() = default;

    // Validates functionality (no duplicate inputs) and monotonicity.
    static MonotoneProcess from_pairs(std::vector<ProcessPair> pairs);

    MonotoneProcess& with_enumerator(EnumeratorFactory make);
    MonotoneProcess& declare_endless(bool endless = true);

    const std::vector<ProcessPair>& pairs() const { return pairs_; }
    std::optional<BitStr> apply(const BitStr& x) const;
    bool endless_declared() const { return endless_declared_; }
    bool has_enumerator() const { return static_cast<bool>(make_); }
    std::unique_ptr<ProcessEnumerator> make_enumerator() const {
        return make_ ? make_() : nullptr;
    }

    // The table extended by up to `extra_pairs` enumerated pairs, each
    // validated against the accumulated table as it arrives.
    MonotoneProcess snapshot(std::uint64_t extra_pairs) const;

private:
    std::vector<ProcessPair> pairs_;
    std::map<BitStr, BitStr> table_;
    EnumeratorFactory make_;
    bool endless_declared_ = false;
};

// First (prefix, extension) pair whose outputs fail f(x) prefix f(xy),
// or nothing if the table is monotone-consistent.
std::optional<std::pair<BitStr, BitStr>> check_monotone(
    const std::vector<ProcessPair>& pairs);

// The minimal inputs mapping into yX*: x encodes y when f(x) extends y
// and no proper prefix of x does. Minimality makes the set prefix-free.
struct EncodingSet {
    BitStr target;
    PrefixFreeSet members;
};

// Encodings relative to the table plus `budget` enumerated pairs.
EncodingSet encodings(const MonotoneProcess& f, const BitStr& y, std::uint64_t budget);

// sigma over the encodings of y: a certified lower bound on the
// process's limit probability for y, nondecreasing in the budget, with
// p(y0) + p(y1) <= p(y) <= 1 at every budget.
Ratio solomonoff_eval(const MonotoneProcess& f, const BitStr& y, std::uint64_t budget);

// Builds a process whose output probabilities track a stage-wise
// subadditive dyadic staged predictor: after stage n the table gives
// every |y| <= min(n, depth) probability exactly h(y, n). Stage by
// stage, free input intervals are split off leftmost-first and mapped
// one output digit deeper. `prefix_closure` additionally maps each
// input whose two children are both in the domain to the longest common
// prefix of their outputs, which leaves all probabilities unchanged.
MonotoneProcess predictor_to_process(const StagedPredictor& h, Stage stages,
                                     std::size_t depth, bool prefix_closure = true);

// Specialization to an exact dyadic distribution: probabilities p(y)
// for every |y| <= depth, realized by a single pass per level. The
// result is endless on the constructed range: the minimal input length
// reaching output length n strictly increases with n.
MonotoneProcess distribution_to_endless_process(const StagedPredictor& p,
                                                std::size_t depth,
                                                bool prefix_closure = true);

// Like distribution_to_endless_process, but every binary digit 2^-i of
// p(y) is realized as one aligned input interval of width 2^-i, so y
// has exactly one reduced encoding of length i per set digit.
MonotoneProcess digit_aligned_process(const StagedPredictor& p, std::size_t depth,
                                      bool prefix_closure = true);

// Inverts an endless process: consumes pairs until the Solomonoff
// masses at level |y| sum to exactly 1, then p(y) is final. Raises
// BudgetError at the pair cap ("not yet" and "not endless" cannot be
// told apart).
Dyadic endless_process_to_distribution(const MonotoneProcess& f, const BitStr& y,
                                       std::uint64_t budget_cap);

// x reduced-encodes y when some finite prefix-free S with sigma(S) = 1
// sends every xs into yX* (all defined), and no proper prefix of x has
// such an S. The search walks all binary covers down to search_depth
// levels below each candidate, so it is sound and complete up to that
// depth. Evaluated against the finite table only.
bool is_reduced_encoding(const MonotoneProcess& f, const BitStr& x, const BitStr& y,
                         std::size_t search_depth);

}  // namespace pred
