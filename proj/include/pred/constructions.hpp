#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pred/dyadic.hpp"
#include "pred/predictor.hpp"

namespace pred {

// One digit of the adversarial construction. The chosen child's value
// fell strictly below parent * threshold, where the dyadic threshold
// sits in (1/2, 2^(2^-n - 1)); `bound` is 2^(n+1) times the product of
// all thresholds so far, so after the step
//   2^(n+1) p(y(n+1)) < p(empty) * bound  holds exactly.
struct AdversaryStep {
    Bit digit;
    Ratio parent_value;
    Ratio child_value;
    Dyadic threshold;
    Dyadic bound;
};

struct AdversaryTrace {
    BitStr sequence;
    std::vector<AdversaryStep> steps;

    // Re-checks every per-step inequality and the cumulative redundancy
    // bound 2^n p(y(n)) < p(empty) * bound_n (< 4 p(empty)).
    bool verify(const StagedPredictor& p) const;
};

// Dyadic threshold for step n: (1 + 2^-(n+2)) / 2, which lies strictly
// between 1/2 and 2^(2^-n - 1) because 2^x > 1 + x ln 2 and ln 2 > 1/4.
Dyadic adversary_threshold(std::size_t n);

// Builds a sequence of bounded redundancy against a nonvanishing exact
// predictor, digit by digit: append whichever child first confirms
// p(y u) < p(y) * threshold, preferring 0 on ties. At least one child
// always qualifies because the threshold exceeds 1/2 and the children
// cannot both exceed half the parent.
AdversaryTrace adversarial_sequence(const StagedPredictor& p, std::size_t n_target);

// Reads the staged approximation of p as an enumeration of
// (string, certified lower bound) pairs and returns the first extension
// of `seed` of length `target_length` whose bound exceeds 2^-c within
// the step budget. Empty result means the budget ran out, not that no
// such string exists.
std::optional<BitStr> trace_recursive_path(const StagedPredictor& p, const BitStr& seed,
                                           int c, std::size_t target_length,
                                           std::uint64_t budget);

}  // namespace pred
