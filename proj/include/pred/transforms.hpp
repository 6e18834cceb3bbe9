#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pred/predictor.hpp"

namespace pred {

// Closed interval [lo, hi] certified to contain a limit value.
struct RatioInterval {
    Ratio lo;
    Ratio hi;
    Ratio width() const { return hi - lo; }
    bool contains(const Ratio& v) const { return lo <= v && v <= hi; }
};

// Encloses the limit p(x) of an additive unit-root predictor to width
// <= eps by running lower bounds up the tree against upper bounds
// obtained from the root downward: the root is pinned at 1, and an
// upper bound on one child is the parent's upper bound minus the
// sibling's lower bound. Terminates for genuine distributions; a
// predictor that is not actually additive trips the step cap and gets a
// BudgetError.
RatioInterval squeeze_eval(const StagedPredictor& p, const BitStr& x, const Ratio& eps,
                           std::uint64_t step_cap = std::uint64_t{1} << 20);

// Increases a predictor to a distribution:
//   p'(empty) = 1,  p'(x0) = p'(x) - p(x1),  p'(x1) = p(x1).
// Dominates the input everywhere. Requires the exact capability (the
// recurrence consumes exact sibling values; a lower bound would break
// domination).
StagedPredictor normalize(const StagedPredictor& p);

// Turns an arbitrary staged map g (total, rational, nondecreasing in
// stage, values in [0,1]) into a stage-wise subadditive staged map with
// the same limit whenever g already underlies a predictor:
//   h(x,0) = 0
//   h(empty,n) = g(empty,n)
//   h(x0,n) = min{ g(x0,n), h(x,n) - h(x1,n-1) }
//   h(x1,n) = min{ g(x1,n), h(x,n) - h(x0,n)  }
// The result is memoized internally; set dyadic_hint when every g value
// is dyadic (the recurrences preserve it).
StagedPredictor subadditivize(StagedPredictor::ApproxFn g, bool dyadic_hint = false);

// Weighted sum of predictors; weights must sum to at most 1. Each
// member i obeys weight_i * p_i(x) <= p_mix(x) at every node and stage.
StagedPredictor mixture(std::vector<std::pair<Ratio, StagedPredictor>> family);

// Positive function with f(x) = (f(x0) + f(x1)) / 2 on every evaluated
// node; a fair-odds gambler's capital.
class Martingale {
public:
    using ValueFn = std::function<Ratio(const BitStr&)>;
    explicit Martingale(ValueFn fn) : fn_(std::move(fn)) {}
    Ratio at(const BitStr& x) const;  // throws on a zero value
private:
    ValueFn fn_;
};

// f(x) = 2^|x| p(x); requires an exact additive unit-root predictor,
// positive on every node it is evaluated at.
Martingale martingale_from_predictor(const StagedPredictor& p);

// p(x) = 2^-|x| f(x) / f(empty); inverse of the above on evaluated nodes.
StagedPredictor predictor_from_martingale(const Martingale& f);

}  // namespace pred
