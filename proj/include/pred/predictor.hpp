#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "pred/bitstr.hpp"
#include "pred/ratio.hpp"

namespace pred {

using Stage = std::uint32_t;

// Capability flags of a staged predictor.
//   additive      the limit satisfies p(x) = p(x0) + p(x1)
//   unit_root     the limit satisfies p(empty) = 1
//   exact         the limit value itself is computable (limit() works)
//   dyadic_valued every staged value has a finite radix-2 representation
struct PredictorCaps {
    bool additive = false;
    bool unit_root = false;
    bool exact = false;
    bool dyadic_valued = false;
};

// A predictor given through a total staged approximation
// approx(x, n), nondecreasing in n, with approx(x, n) a certified lower
// bound on the limit p(x). Every stage must satisfy
//   approx(x, n) >= approx(x0, n) + approx(x1, n)   and
//   0 <= approx(x, n) <= 1.
// The library never reports a limit value unless `exact` is set.
//
// Predictors are immutable values; evaluation is pure and safe to share
// across threads.
class StagedPredictor {
public:
    using ApproxFn = std::function<Ratio(const BitStr&, Stage)>;
    using LimitFn = std::function<Ratio(const BitStr&)>;
    using CondFn = std::function<Ratio(const BitStr&, Bit)>;

    StagedPredictor() = default;
    StagedPredictor(ApproxFn approx, PredictorCaps caps);

    // Exact predictor defined directly by its limit (stage-independent).
    static StagedPredictor from_limit(LimitFn limit, PredictorCaps caps);

    Ratio at(const BitStr& x, Stage n) const { return approx_(x, n); }

    // The limit value; requires the exact capability.
    Ratio limit(const BitStr& x) const;

    const PredictorCaps& caps() const { return caps_; }

    // Optional exact conditional limit(xu)/limit(x) fast path (0/0 = 0).
    // Families whose conditionals are cheap provide it; evaluation falls
    // back to two limit() calls otherwise.
    Ratio conditional(const BitStr& x, Bit u) const;
    StagedPredictor& with_conditional(CondFn fn);

    bool valid() const { return static_cast<bool>(approx_); }

private:
    ApproxFn approx_;
    LimitFn limit_;
    CondFn cond_;
    PredictorCaps caps_;
};

// ---- canonical families ----

// p(x) = 2^-|x| at every stage.
StagedPredictor uniform_predictor();

// p(x) = r^(#ones) * (1-r)^(#zeros); requires 0 <= r <= 1.
StagedPredictor bernoulli_predictor(const Ratio& r);

// Point mass on the infinite periodic extension of `pattern`.
StagedPredictor dirac_predictor(const BitStr& pattern);

// Rule for values outside a finite table.
//   ZeroOutside      missing nodes have value 0
//   ClosedUnderPrefix below the deepest tabled ancestor, all mass routes
//                     down the 0-child: x gets the ancestor's value when
//                     the connecting path is all zeros, otherwise 0
enum class TableDefault { ZeroOutside, ClosedUnderPrefix };

// Stage-independent predictor from a finite table. Rejects tables that
// violate p(x) >= p(x0) + p(x1) anywhere, or values outside [0,1].
StagedPredictor table_predictor(const std::map<BitStr, Ratio>& entries,
                                TableDefault default_rule);

// ---- basic observables ----

// approx(x,n) - approx(x0,n) - approx(x1,n); nonnegative by the staged
// subadditivity contract.
Ratio surplus(const StagedPredictor& p, const BitStr& x, Stage n);

// Redundancy of x: the exact ratio 2^|x| * p(x), with log2 rendered only
// on demand. Zero ratio displays as -inf.
struct RedundancyValue {
    Ratio ratio;
    bool log_is_neg_infinity() const { return ratio.is_zero(); }
    double display_log2() const;       // requires nonzero ratio
    std::string display_log2_str() const;  // 9 fractional digits or "-inf"
};

RedundancyValue redundancy(const StagedPredictor& p, const BitStr& x, Stage n);

}  // namespace pred
