#include "pred/randomness.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "pred/errors.hpp"

namespace pred {

// ---- growth functions ----

GrowthFunction GrowthFunction::linear(const Ratio& alpha) {
    return GrowthFunction(Kind::Linear, alpha, {});
}
GrowthFunction GrowthFunction::sqrt() { return GrowthFunction(Kind::Sqrt, Ratio(0), {}); }
GrowthFunction GrowthFunction::log2() { return GrowthFunction(Kind::Log2, Ratio(0), {}); }

GrowthFunction GrowthFunction::table(std::vector<std::uint64_t> values) {
    if (values.empty()) throw PreconditionError("growth table must be nonempty");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[i - 1])
            throw PreconditionError("growth table must be nondecreasing");
    return GrowthFunction(Kind::Table, Ratio(0), std::move(values));
}

std::uint64_t GrowthFunction::operator()(std::uint64_t n) const {
    switch (kind_) {
        case Kind::Linear: {
            mpz_class num = alpha_.numerator() * mpz_class(static_cast<unsigned long>(n));
            mpz_class q = num / alpha_.denominator();
            return q.get_ui();
        }
        case Kind::Sqrt: {
            mpz_class m(static_cast<unsigned long>(n));
            mpz_class r;
            mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
            return r.get_ui();
        }
        case Kind::Log2: {
            std::uint64_t v = n + 1, out = 0;
            while (v >>= 1) ++out;
            return out;
        }
        case Kind::Table:
            if (n < values_.size()) return values_[n];
            // unit steps past the end keep the function unbounded
            return values_.back() + (n - (values_.size() - 1));
    }
    return 0;
}

std::string GrowthFunction::str() const {
    switch (kind_) {
        case Kind::Linear: return "linear " + alpha_.str();
        case Kind::Sqrt: return "sqrt";
        case Kind::Log2: return "log2";
        case Kind::Table: {
            std::string out = "table ";
            for (std::size_t i = 0; i < values_.size(); ++i)
                out += (i ? "," : "") + std::to_string(values_[i]);
            return out;
        }
    }
    return "";
}

// ---- sequential tests ----

namespace {

class ItemsEnumerator : public TestEnumerator {
public:
    explicit ItemsEnumerator(std::shared_ptr<const std::vector<TestItem>> items)
        : items_(std::move(items)) {}
    std::optional<TestItem> step() override {
        if (pos_ >= items_->size()) return std::nullopt;
        return (*items_)[pos_++];
    }
    std::uint64_t steps_for_stage(Stage n) const override { return n; }

private:
    std::shared_ptr<const std::vector<TestItem>> items_;
    std::size_t pos_ = 0;
};

constexpr std::uint64_t kStageStepCap = std::uint64_t{1} << 22;

// Round-robin dovetail over (|y|, y, m, stage): diagonal d checks every
// string of length <= d against every level m <= d at stage d.
class DovetailEnumerator : public TestEnumerator {
public:
    DovetailEnumerator(StagedPredictor p, StagedPredictor challenger)
        : p_(std::move(p)), challenger_(std::move(challenger)) {}

    std::optional<TestItem> step() override {
        BitStr y = BitStr::from_index(len_, idx_);
        std::optional<TestItem> out;
        if (!emitted_.count({y, m_})) {
            Ratio rhs = Ratio::pow2(m_) * p_.limit(y);
            if (challenger_.at(y, static_cast<Stage>(d_)) > rhs) {
                emitted_.insert({y, m_});
                out = TestItem{y, m_};
            }
        }
        advance();
        return out;
    }

    std::uint64_t steps_for_stage(Stage n) const override {
        std::uint64_t total = 0;
        for (std::uint64_t d = 1; d <= n; ++d) {
            std::uint64_t strings = (std::uint64_t{1} << (d + 1)) - 1;
            total += strings * d;
            if (total >= kStageStepCap) return kStageStepCap;
        }
        return total;
    }

private:
    void advance() {
        if (++m_ <= static_cast<Level>(d_)) return;
        m_ = 1;
        if (++idx_ < (std::uint64_t{1} << len_)) return;
        idx_ = 0;
        if (++len_ <= d_) return;
        len_ = 0;
        ++d_;
    }

    StagedPredictor p_, challenger_;
    std::uint64_t d_ = 1, len_ = 0, idx_ = 0;
    Level m_ = 1;
    std::set<TestItem> emitted_;
};

}  // namespace

SequentialTest::SequentialTest(EnumeratorFactory make, StagedPredictor reference)
    : make_(std::move(make)), reference_(std::move(reference)) {
    const auto& caps = reference_.caps();
    if (!caps.additive || !caps.unit_root || !caps.exact)
        throw PreconditionError(
            "a sequential test's reference must be an exact additive unit-root "
            "distribution");
}

SequentialTest SequentialTest::from_items(std::vector<TestItem> items,
                                          StagedPredictor reference) {
    for (const auto& [y, m] : items)
        if (m < 1) throw PreconditionError("test levels start at 1");
    auto shared = std::make_shared<const std::vector<TestItem>>(std::move(items));
    return SequentialTest(
        [shared]() { return std::make_unique<ItemsEnumerator>(shared); },
        std::move(reference));
}

std::map<BitStr, Level> SequentialTest::materialize(std::uint64_t budget) const {
    std::map<BitStr, Level> out;
    auto en = enumerator();
    for (std::uint64_t i = 0; i < budget; ++i) {
        auto item = en->step();
        if (!item) continue;
        auto [y, m] = *item;
        auto it = out.find(y);
        if (it == out.end())
            out.emplace(y, m);
        else
            it->second = std::max(it->second, m);
    }
    return out;
}

Level critical_level_from(const std::map<BitStr, Level>& items, const BitStr& x) {
    Level best = 0;
    for (std::size_t len = 0; len <= x.size(); ++len) {
        auto it = items.find(x.prefix(len));
        if (it != items.end()) best = std::max(best, it->second);
    }
    return best;
}

Level SequentialTest::critical_level(const BitStr& x, std::uint64_t budget) const {
    return critical_level_from(materialize(budget), x);
}

Level SequentialTest::critical_level_staged(const BitStr& x, Stage n) const {
    return critical_level(x, steps_for_stage(n));
}

std::uint64_t SequentialTest::steps_for_stage(Stage n) const {
    return enumerator()->steps_for_stage(n);
}

bool verify_numerosity(const SequentialTest& V, std::size_t max_n, Level max_m,
                       std::uint64_t budget) {
    auto items = V.materialize(budget);
    for (std::size_t n = 0; n <= max_n; ++n) {
        for (Level m = 1; m <= max_m; ++m) {
            Ratio mass;
            for (const BitStr& x : all_strings_of_length(n))
                if (critical_level_from(items, x) >= m) mass += V.reference().limit(x);
            if (mass > Ratio::pow2(-m)) return false;
        }
    }
    return true;
}

SequentialTest test_from_predictor(const StagedPredictor& p,
                                   const StagedPredictor& p_prime) {
    const auto& caps = p.caps();
    if (!caps.additive || !caps.unit_root || !caps.exact)
        throw PreconditionError(
            "test_from_predictor needs an exact additive unit-root reference");
    return SequentialTest(
        [p, p_prime]() { return std::make_unique<DovetailEnumerator>(p, p_prime); }, p);
}

// ---- weight functions ----

WeightFunction::WeightFunction(std::string name, ValueFn value, TailFn tail)
    : name_(std::move(name)), value_(std::move(value)), tail_(std::move(tail)) {}

bool WeightFunction::validate() const {
    constexpr Level kTruncation = 64;
    Ratio sum;
    Ratio prev;
    for (Level m = 0; m <= kTruncation; ++m) {
        Ratio v = value_(m);
        if (m > 0 && v < prev) return false;
        sum += v * Ratio::pow2(-m - 1);
        prev = v;
    }
    return sum + tail_(kTruncation + 1) <= Ratio(1);
}

WeightFunction WeightFunction::zero() {
    return WeightFunction(
        "zero", [](Level) { return Ratio(0); }, [](Level) { return Ratio(0); });
}

WeightFunction WeightFunction::constant_one() {
    return WeightFunction(
        "one", [](Level) { return Ratio(1); },
        [](Level m0) { return Ratio::pow2(-m0); });
}

WeightFunction WeightFunction::identity() {
    return WeightFunction(
        "identity", [](Level m) { return Ratio(m); },
        // sum over m >= m0 of m 2^-(m+1) is exactly (m0+1) 2^-m0
        [](Level m0) { return Ratio(m0 + 1) * Ratio::pow2(-m0); });
}

namespace {

// Certified rational lower bound of 2^m / ((m+2) log2(m+5)^2), using
// k <= N log2(m+5) < k+1 with k read off the bit length of (m+5)^N.
Ratio near_optimal_raw(Level m) {
    constexpr unsigned long kPrecision = 32;
    mpz_class base(m + 5);
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), kPrecision);
    unsigned long k = static_cast<unsigned long>(mpz_sizeinbase(power.get_mpz_t(), 2)) - 1;
    Ratio log_upper(static_cast<long>(k + 1), static_cast<long>(kPrecision));
    return Ratio::pow2(m) / (Ratio(m + 2) * log_upper * log_upper);
}

}  // namespace

WeightFunction WeightFunction::near_optimal() {
    return WeightFunction(
        "near-optimal",
        [](Level m) {
            // running max keeps the approximation nondecreasing; the true
            // function increases, so this stays a lower bound
            Ratio best;
            for (Level i = 0; i <= m; ++i) best = Ratio::max(best, near_optimal_raw(i));
            return best;
        },
        [](Level m0) {
            if (m0 < 65)
                throw PreconditionError("near-optimal tail bound certified for m0 >= 65");
            // integral comparison: sum_{m>=65} 1/(2(m+2) log2(m+5)^2) < 3/50
            return Ratio(3, 50);
        });
}

// ---- predictor from test ----

namespace {

struct QState {
    SequentialTest V;
    StagedPredictor p;
    WeightFunction f;
    std::size_t n_max;
    std::map<Stage, std::shared_ptr<const std::map<BitStr, Level>>> cache;
    std::mutex mu;

    QState(SequentialTest v, StagedPredictor p_in, WeightFunction f_in, std::size_t n)
        : V(std::move(v)), p(std::move(p_in)), f(std::move(f_in)), n_max(n) {}

    std::shared_ptr<const std::map<BitStr, Level>> items_at(Stage n) {
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = cache.find(n);
            if (it != cache.end()) return it->second;
        }
        auto fresh = std::make_shared<const std::map<BitStr, Level>>(
            V.materialize(V.steps_for_stage(n)));
        std::lock_guard<std::mutex> lock(mu);
        return cache.emplace(n, fresh).first->second;
    }

    Ratio q(const BitStr& x, Stage n) {
        std::size_t horizon = std::min<std::size_t>(n, n_max);
        if (horizon < x.size()) return Ratio(0);
        auto items = items_at(n);
        std::size_t extend = horizon - x.size();
        Ratio sum;
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << extend); ++idx) {
            BitStr y = x.concat(BitStr::from_index(extend, idx));
            Level m = critical_level_from(*items, y);
            sum += f(m) * p.limit(y);
        }
        return sum;
    }
};

}  // namespace

StagedPredictor predictor_from_test(const SequentialTest& V, const StagedPredictor& p,
                                    const WeightFunction& f, std::size_t n_max) {
    const auto& caps = p.caps();
    if (!caps.additive || !caps.unit_root || !caps.exact)
        throw PreconditionError(
            "predictor_from_test needs an exact additive unit-root distribution");
    if (!f.validate())
        throw PreconditionError("weight function \"" + f.name() +
                                "\" fails the weight-sum check");
    auto state = std::make_shared<QState>(V, p, f, n_max);
    PredictorCaps out_caps;
    out_caps.additive = true;
    return StagedPredictor(
        [state](const BitStr& x, Stage n) { return state->q(x, n); }, out_caps);
}

// ---- boost ----

CriticalBound::CriticalBound(std::map<BitStr, Level> entries)
    : entries_(std::move(entries)), max_level_(0) {
    for (const auto& [x, m] : entries_) {
        if (m < 0) throw PreconditionError("critical-level bounds are nonnegative");
        max_level_ = std::max(max_level_, m);
    }
}

Level CriticalBound::operator()(const BitStr& x) const {
    return critical_level_from(entries_, x);
}

Ratio max_weighted_antichain(const BitStr& root, std::size_t min_len, std::size_t max_len,
                             const std::function<Ratio(const BitStr&)>& weight) {
    Ratio own = root.size() >= min_len && root.size() <= max_len ? weight(root) : Ratio(0);
    if (root.size() >= max_len) return own;
    Ratio sub = max_weighted_antichain(root.child(0), min_len, max_len, weight) +
                max_weighted_antichain(root.child(1), min_len, max_len, weight);
    return Ratio::max(own, sub);
}

StagedPredictor boost(const StagedPredictor& p, const CriticalBound& f,
                      const GrowthFunction& g, std::size_t depth,
                      std::uint64_t k_search_cap) {
    const auto& caps = p.caps();
    if (!caps.additive || !caps.unit_root || !caps.exact)
        throw PreconditionError("boost needs an exact additive unit-root distribution");
    auto g_at = [&g](std::uint64_t n) {
        std::uint64_t v = g(n);
        if (v < 2)
            throw PreconditionError("boost needs g >= 2, got g(" + std::to_string(n) +
                                    ") = " + std::to_string(v));
        return v;
    };
    auto cutoff_mass = [&](std::uint64_t k) {
        std::uint64_t gk = g_at(k);
        return Ratio(static_cast<long>(gk + 1)) * Ratio::pow2(-static_cast<long>(gk));
    };
    auto weight = [&](const BitStr& y) {
        std::uint64_t gy = g_at(y.size());
        if (f(y) < static_cast<Level>(gy)) return Ratio(0);
        return Ratio(static_cast<long>(gy)) * p.limit(y);
    };

    struct Node {
        Ratio p1, p2, p3;
    };
    std::map<BitStr, Node> nodes;
    Ratio root_p2 = cutoff_mass(1);
    nodes.emplace(BitStr::empty(), Node{Ratio(0), root_p2, Ratio(1) - root_p2});

    for (std::size_t len = 0; len < depth; ++len) {
        for (const BitStr& x : all_strings_of_length(len)) {
            const Node& cur = nodes.at(x);
            if (cur.p3.is_zero())
                throw BudgetError("boost residue vanished at " + x.str() +
                                  "; no cutoff exists");
            Ratio half = cur.p3 * Ratio(1, 2);
            std::uint64_t k = len + 2;
            std::uint64_t tries = 0;
            while (cutoff_mass(k) >= half) {
                ++k;
                if (++tries > k_search_cap)
                    throw BudgetError("boost cutoff search exceeded its cap at " + x.str());
            }
            // members deeper than this can never carry weight: g has
            // passed the largest level f can certify
            std::size_t max_len = static_cast<std::size_t>(k - 1);
            std::size_t effective = len;
            for (std::size_t l = len + 1; l <= max_len; ++l) {
                if (g_at(l) <= static_cast<std::uint64_t>(f.max_level())) effective = l;
                else break;
            }
            Ratio p1_children[2];
            for (Bit u : {0, 1})
                p1_children[u] = max_weighted_antichain(x.child(u), 0,
                                                        std::min(max_len, effective), weight);
            Ratio p2_child = cutoff_mass(k);
            if (p1_children[0] + p1_children[1] > cur.p1 + cur.p2)
                throw PreconditionError(
                    "boost: the critical-level bound rejects more mass below " + x.str() +
                    " than its levels allow; it is no valid test bound for p");
            Ratio pooled = cur.p3 + cur.p1 + cur.p2 - p1_children[0] - p1_children[1];
            Ratio p3_child = pooled * Ratio(1, 2) - p2_child;
            for (Bit u : {0, 1})
                nodes.emplace(x.child(u), Node{p1_children[u], p2_child, p3_child});
        }
    }
    std::map<BitStr, Ratio> table;
    for (const auto& [x, node] : nodes) table.emplace(x, node.p1 + node.p2 + node.p3);
    return table_predictor(table, TableDefault::ClosedUnderPrefix);
}

// ---- calibration and growth profiles ----

CalibrationReport calibration_report(const StagedPredictor& p, const std::vector<Bit>& z,
                                     const Ratio& r, const Ratio& s,
                                     const Ratio& tolerance) {
    if (!(Ratio(1, 2) < r && r <= s && s < Ratio(1)))
        throw PreconditionError("calibration window must satisfy 1/2 < r <= s < 1");
    const auto& caps = p.caps();
    if (!caps.additive || !caps.unit_root || !caps.exact)
        throw PreconditionError(
            "calibration needs an exact additive unit-root distribution");
    auto in_window = [&](const Ratio& c) { return r <= c && c <= s; };
    CalibrationReport report;
    report.window_lo = r;
    report.window_hi = s;
    BitStr prefix;
    for (std::size_t i = 0; i < z.size(); ++i) {
        Ratio c0 = p.conditional(prefix, 0);
        Ratio c1 = p.conditional(prefix, 1);
        if (in_window(c0)) ++report.predictions;
        if (in_window(c1)) ++report.predictions;
        Ratio actual = z[i] ? c1 : c0;
        if (in_window(actual)) ++report.confirmed;
        if (actual.is_zero())
            throw PreconditionError("zero-probability path at position " +
                                    std::to_string(i + 1));
        prefix.push_back(z[i]);
    }
    if (report.predictions == 0) {
        report.verdict = CalibrationVerdict::Vacuous;
        return report;
    }
    report.ratio = Ratio(static_cast<long>(report.confirmed)) /
                   Ratio(static_cast<long>(report.predictions));
    if (report.ratio + tolerance < r)
        report.verdict = CalibrationVerdict::Below;
    else if (report.ratio > s + tolerance)
        report.verdict = CalibrationVerdict::Above;
    else
        report.verdict = CalibrationVerdict::Within;
    return report;
}

std::vector<ProfilePoint> growth_profile(const StagedPredictor& p,
                                         const std::vector<Bit>& z,
                                         const GrowthFunction& g, Stage stage) {
    std::vector<ProfilePoint> out;
    BitStr prefix;
    for (std::size_t n = 1; n <= z.size(); ++n) {
        prefix.push_back(z[n - 1]);
        out.push_back(ProfilePoint{
            n, Ratio::pow2(static_cast<long>(n)) * p.at(prefix, stage), g(n)});
    }
    return out;
}

}  // namespace pred
