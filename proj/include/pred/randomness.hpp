#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pred/predictor.hpp"

namespace pred {

// ---- growth functions ----

// Recursive nondecreasing unbounded map on the naturals; the yardstick
// for effectively observable growth. A table continues with unit steps
// past its last entry so that every kind stays unbounded.
class GrowthFunction {
public:
    static GrowthFunction linear(const Ratio& alpha);  // floor(alpha * n)
    static GrowthFunction sqrt();                      // floor(sqrt(n))
    static GrowthFunction log2();                      // floor(log2(n + 1))
    static GrowthFunction table(std::vector<std::uint64_t> values);

    std::uint64_t operator()(std::uint64_t n) const;
    std::string str() const;

private:
    enum class Kind { Linear, Sqrt, Log2, Table };
    GrowthFunction(Kind kind, Ratio alpha, std::vector<std::uint64_t> values)
        : kind_(kind), alpha_(std::move(alpha)), values_(std::move(values)) {}
    Kind kind_;
    Ratio alpha_;
    std::vector<std::uint64_t> values_;
};

// ---- sequential tests ----

using Level = int;
using TestItem = std::pair<BitStr, Level>;  // level >= 1

// Single-consumer stateful enumeration of (string, level) pairs.
// step() performs one unit of work and yields at most one pair; an
// exhausted finite enumeration keeps yielding nothing.
class TestEnumerator {
public:
    virtual ~TestEnumerator() = default;
    virtual std::optional<TestItem> step() = 0;
    // How many steps make up stage n for staged consumers. Monotone in
    // n and saturating, so staged evaluation never runs away.
    virtual std::uint64_t steps_for_stage(Stage n) const = 0;
};

// A sequential randomness test: an enumerable set of (string, level)
// pairs together with the reference distribution its level masses are
// measured against. Membership of (x, m) means some enumerated (y, m')
// has y a prefix of x and m' >= m, so nestedness and monotonicity hold
// by construction; numerosity
//   sum over x in V_m of length n of p_ref(x) <= 2^-m
// is the one obligation checked separately.
class SequentialTest {
public:
    using EnumeratorFactory = std::function<std::unique_ptr<TestEnumerator>()>;

    SequentialTest(EnumeratorFactory make, StagedPredictor reference);

    static SequentialTest from_items(std::vector<TestItem> items,
                                     StagedPredictor reference);

    std::unique_ptr<TestEnumerator> enumerator() const { return make_(); }
    const StagedPredictor& reference() const { return reference_; }

    // Highest enumerated level among prefixes of x within the first
    // `budget` steps, descending enumerated levels to closure; 0 when
    // nothing rejects x. A certified lower bound on the true critical
    // level, nondecreasing in the budget.
    Level critical_level(const BitStr& x, std::uint64_t budget) const;
    Level critical_level_staged(const BitStr& x, Stage n) const;

    // Max enumerated level per string after `budget` steps.
    std::map<BitStr, Level> materialize(std::uint64_t budget) const;

    std::uint64_t steps_for_stage(Stage n) const;

private:
    EnumeratorFactory make_;
    StagedPredictor reference_;
};

Level critical_level_from(const std::map<BitStr, Level>& items, const BitStr& x);

// Exhaustive numerosity check against the reference distribution for
// all n <= max_n, m <= max_m, at the given enumeration budget.
bool verify_numerosity(const SequentialTest& V, std::size_t max_n, Level max_m,
                       std::uint64_t budget);

// Test rejecting exactly where the challenger p_prime beats the
// reference distribution p by a factor 2^m on some prefix:
//   emit (y, m) once approx_prime(y, stage) > 2^m * p(y).
// The enumerator dovetails round-robin over (|y|, y, m, stage).
// Requires p exact, additive, unit-root.
SequentialTest test_from_predictor(const StagedPredictor& p,
                                   const StagedPredictor& p_prime);

// ---- weight functions ----

// Nondecreasing level weights with sum over m of f(m) 2^-(m+1) <= 1.
// The sum is checked on the truncation m <= 64 plus a certified tail
// bound supplied with the weight.
class WeightFunction {
public:
    using ValueFn = std::function<Ratio(Level)>;
    using TailFn = std::function<Ratio(Level)>;  // bound on the sum from m0 up

    WeightFunction(std::string name, ValueFn value, TailFn tail);

    Ratio operator()(Level m) const { return value_(m); }
    const std::string& name() const { return name_; }
    bool validate() const;  // nondecreasing + truncated sum + tail <= 1

    static WeightFunction zero();
    static WeightFunction constant_one();
    static WeightFunction identity();  // f(m) = m
    // Near-optimal additive weight 2^m / ((m+2) * log2(m+5)^2), realized
    // as a certified dyadic-precision lower approximation.
    static WeightFunction near_optimal();

private:
    std::string name_;
    ValueFn value_;
    TailFn tail_;
};

// Additive predictor accumulating weighted reference mass over the
// test's rejections:
//   q(x, n) = sum over y extending x at the horizon min(n, n_max) of
//             f(m_V(y)) p(y),
// critical levels taken at the stage-n enumeration budget. q(empty
// string, n) <= 1 at every stage, q is additive above the horizon, and
// q(x, n) >= f(m_V(x)) p(x) once n >= |x|.
StagedPredictor predictor_from_test(const SequentialTest& V, const StagedPredictor& p,
                                    const WeightFunction& f, std::size_t n_max);

// ---- boosting a distribution along a test's rejections ----

// Recursive lower bound of a critical level, a finite table read
// through extension-monotone closure.
class CriticalBound {
public:
    explicit CriticalBound(std::map<BitStr, Level> entries);
    Level operator()(const BitStr& x) const;  // max over tabled prefixes
    Level max_level() const { return max_level_; }

private:
    std::map<BitStr, Level> entries_;
    Level max_level_;
};

// Largest total weight of a prefix-free set below `root` whose members
// have lengths in [min_len, max_len], by tree dynamic programming
// best(y) = max(weight(y), best(y0) + best(y1)).
Ratio max_weighted_antichain(const BitStr& root, std::size_t min_len, std::size_t max_len,
                             const std::function<Ratio(const BitStr&)>& weight);

// Distribution p' with p'(x) >= g(|x|) p(x) wherever f(x) >= g(|x|),
// built from three exact components:
//   p1: best depth-bounded antichain mass g(|y|) p(y) over flagged y
//   p2: (g(k)+1) 2^-g(k) at the per-node cutoff k
//   p3: the residue keeping the sum an exact distribution
// where k = least integer >= |x|+2 with (g(k)+1) 2^-g(k) < p3(x)/2.
// Requires an exact distribution p and g >= 2 on evaluated arguments;
// the output is materialized to `depth` and completed below it by
// routing mass down 0-children.
StagedPredictor boost(const StagedPredictor& p, const CriticalBound& f,
                      const GrowthFunction& g, std::size_t depth,
                      std::uint64_t k_search_cap = 1 << 20);

// ---- calibration and growth profiles ----

enum class CalibrationVerdict { Vacuous, Within, Below, Above };

struct CalibrationReport {
    Ratio window_lo;
    Ratio window_hi;
    std::uint64_t predictions = 0;  // next-digit forecasts with conditional in the window
    std::uint64_t confirmed = 0;    // of those, how many digits occurred
    Ratio ratio;                    // confirmed / predictions (0 when vacuous)
    CalibrationVerdict verdict = CalibrationVerdict::Vacuous;
};

// Counts next-digit predictions with conditional probability inside
// [r, s] along the stream prefix z and how many were confirmed.
// Requires 1/2 < r <= s < 1, an exact distribution, and positive
// probability along the stream. The verdict compares the confirmed
// proportion against the window with the given tolerance.
CalibrationReport calibration_report(const StagedPredictor& p, const std::vector<Bit>& z,
                                     const Ratio& r, const Ratio& s,
                                     const Ratio& tolerance = Ratio(0));

struct ProfilePoint {
    std::size_t n;
    Ratio ratio;  // 2^n * p(z(n)), exact
    std::uint64_t growth;
};

// Exact redundancy ratios along a stream prefix next to g(n); finite
// evidence only, no limit claims.
std::vector<ProfilePoint> growth_profile(const StagedPredictor& p,
                                         const std::vector<Bit>& z,
                                         const GrowthFunction& g, Stage stage);

}  // namespace pred
