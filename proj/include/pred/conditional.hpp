#pragma once

#include <utility>

#include "pred/predictor.hpp"

namespace pred {

// Sharpest bounds on the conditional probability p'(vw)/p'(v) over all
// distributions p' dominating p, derived from p's values on the comb
// {x, x-with-last-digit-flipped : x a prefix of vw}.
struct ConditionalBounds {
    Ratio lower;
    Ratio upper;
};

// lower = p(vw) / (1 - sum_{i=1..|v|} p(v(i)^-))
// upper = (1 - sum_{i=1..|vw|} p((vw)(i)^-)) / (1 - sum_{i=1..|v|} p(v(i)^-))
// evaluated at stage n, with 0/0 read as 0. Requires |w| >= 1. The lower
// bound is nondecreasing and the upper bound nonincreasing in n.
ConditionalBounds conditional_bounds(const StagedPredictor& p, const BitStr& v,
                                     const BitStr& w, Stage n);

// Distributions dominating p on the comb that attain the two bounds as
// their conditionals p'(vw)/p'(v). Outside the comb all residual mass
// routes down the 0-child, which keeps the outputs reproducible.
// Requires p exact, |w| >= 1, and a nonzero bound denominator.
std::pair<StagedPredictor, StagedPredictor> extremal_distributions(
    const StagedPredictor& p, const BitStr& v, const BitStr& w);

// Conditional semantics for a process that may or may not halt.
//   Nonterminating  p'(x,y)  = p(xy)/p(x)
//   Halting         p''(x,y) = product over digits u of y of
//                              p(xy(j)) / (p(xy(j)) + p(xy(j)^-))
// with 0/0 read as 0. No monotonicity-in-stage contract: these values
// are certified only when the predictor's exact values back them.
enum class CondMode { Nonterminating, Halting };

struct CondValue {
    Ratio value;
    bool certified;  // exact value, safe to treat as the limit
};

CondValue cond_probability(const StagedPredictor& p, const BitStr& x, const BitStr& y,
                           CondMode mode, Stage n);

}  // namespace pred
