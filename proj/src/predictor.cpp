#include "pred/predictor.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "pred/errors.hpp"

namespace pred {

StagedPredictor::StagedPredictor(ApproxFn approx, PredictorCaps caps)
    : approx_(std::move(approx)), caps_(caps) {
    if (caps_.exact)
        throw PreconditionError("exact predictors must supply a limit function");
}

StagedPredictor StagedPredictor::from_limit(LimitFn limit, PredictorCaps caps) {
    StagedPredictor p;
    caps.exact = true;
    p.caps_ = caps;
    p.limit_ = limit;
    p.approx_ = [limit](const BitStr& x, Stage) { return limit(x); };
    return p;
}

Ratio StagedPredictor::limit(const BitStr& x) const {
    if (!caps_.exact || !limit_)
        throw PreconditionError("limit requested from a non-exact predictor");
    return limit_(x);
}

Ratio StagedPredictor::conditional(const BitStr& x, Bit u) const {
    if (cond_) return cond_(x, u);
    return Ratio::quotient_or_zero(limit(x.child(u)), limit(x));
}

StagedPredictor& StagedPredictor::with_conditional(CondFn fn) {
    cond_ = std::move(fn);
    return *this;
}

StagedPredictor uniform_predictor() {
    PredictorCaps caps{true, true, true, true};
    auto p = StagedPredictor::from_limit(
        [](const BitStr& x) { return Ratio::pow2(-static_cast<long>(x.size())); }, caps);
    p.with_conditional([](const BitStr&, Bit) { return Ratio(1, 2); });
    return p;
}

StagedPredictor bernoulli_predictor(const Ratio& r) {
    if (r > Ratio(1))
        throw PreconditionError("bernoulli parameter must lie in [0,1], got " + r.str());
    Ratio q = Ratio(1) - r;
    auto p = StagedPredictor::from_limit(
        [r, q](const BitStr& x) {
            Ratio v(1);
            for (std::size_t i = 0; i < x.size(); ++i) v *= x.bit(i) ? r : q;
            return v;
        },
        PredictorCaps{true, true, true, r.is_dyadic() && q.is_dyadic()});
    p.with_conditional([r, q](const BitStr&, Bit u) { return u ? r : q; });
    return p;
}

StagedPredictor dirac_predictor(const BitStr& pattern) {
    if (pattern.is_empty())
        throw PreconditionError("dirac predictor needs a nonempty pattern");
    auto on_path = [pattern](const BitStr& x) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x.bit(i) != pattern.bit(i % pattern.size())) return false;
        return true;
    };
    auto p = StagedPredictor::from_limit(
        [on_path](const BitStr& x) { return on_path(x) ? Ratio(1) : Ratio(0); },
        PredictorCaps{true, true, true, true});
    p.with_conditional([on_path](const BitStr& x, Bit u) {
        return on_path(x) && on_path(x.child(u)) ? Ratio(1) : Ratio(0);
    });
    return p;
}

namespace {

// Value of a table node under the given default rule.
Ratio table_value(const std::map<BitStr, Ratio>& entries, TableDefault rule, const BitStr& x) {
    auto it = entries.find(x);
    if (it != entries.end()) return it->second;
    if (rule == TableDefault::ZeroOutside) return Ratio(0);
    // deepest tabled ancestor; mass continues down the all-zeros path
    for (std::size_t len = x.size(); len-- > 0;) {
        auto anc = entries.find(x.prefix(len));
        if (anc == entries.end()) continue;
        for (std::size_t i = len; i < x.size(); ++i)
            if (x.bit(i) != 0) return Ratio(0);
        return anc->second;
    }
    return Ratio(0);
}

}  // namespace

StagedPredictor table_predictor(const std::map<BitStr, Ratio>& entries,
                                TableDefault default_rule) {
    bool additive = true;
    bool dyadic = true;
    for (const auto& [x, v] : entries) {
        if (v > Ratio(1))
            throw PreconditionError("table value " + v.str() + " at " + x.str() +
                                    " is outside [0,1]");
        if (!v.is_dyadic()) dyadic = false;
    }
    // check p(x) >= p(x0) + p(x1) at every tabled node and every parent
    // of a tabled node (resolution through the default rule)
    std::set<BitStr> nodes;
    for (const auto& [x, v] : entries) {
        nodes.insert(x);
        if (!x.is_empty()) nodes.insert(x.parent());
    }
    for (const BitStr& x : nodes) {
        Ratio v = table_value(entries, default_rule, x);
        Ratio children = table_value(entries, default_rule, x.child(0)) +
                         table_value(entries, default_rule, x.child(1));
        if (children > v)
            throw PreconditionError("table violates subadditivity at " + x.str() + ": " +
                                    v.str() + " < " + children.str());
        if (children < v) additive = false;
    }
    if (default_rule == TableDefault::ZeroOutside) {
        // mass stops at the table frontier, so the limit is additive only
        // in the degenerate all-zero case
        for (const auto& [x, v] : entries)
            if (!v.is_zero()) { additive = false; break; }
    }
    bool unit_root = table_value(entries, default_rule, BitStr::empty()).is_one();
    auto copy = entries;
    auto rule = default_rule;
    return StagedPredictor::from_limit(
        [copy, rule](const BitStr& x) { return table_value(copy, rule, x); },
        PredictorCaps{additive, unit_root, true, dyadic});
}

Ratio surplus(const StagedPredictor& p, const BitStr& x, Stage n) {
    return p.at(x, n) - p.at(x.child(0), n) - p.at(x.child(1), n);
}

double RedundancyValue::display_log2() const {
    if (ratio.is_zero()) throw PreconditionError("log2 of zero redundancy ratio");
    return ratio.log2_approx();
}

std::string RedundancyValue::display_log2_str() const {
    if (ratio.is_zero()) return "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", display_log2());
    return buf;
}

RedundancyValue redundancy(const StagedPredictor& p, const BitStr& x, Stage n) {
    return RedundancyValue{Ratio::pow2(static_cast<long>(x.size())) * p.at(x, n)};
}

}  // namespace pred
