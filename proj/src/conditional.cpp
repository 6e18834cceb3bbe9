#include "pred/conditional.hpp"

#include <memory>
#include <vector>

#include "pred/errors.hpp"

namespace pred {

namespace {

// 1 - sum_{i=1..j} p(path(i)^-), the sharpest upper bound on any
// dominating distribution's value at path(j).
Ratio comb_headroom(const StagedPredictor& p, const BitStr& path, std::size_t j, Stage n) {
    Ratio sum;
    for (std::size_t i = 1; i <= j; ++i)
        sum += p.at(path.prefix(i).complement_last(), n);
    return Ratio(1) - sum;
}

}  // namespace

ConditionalBounds conditional_bounds(const StagedPredictor& p, const BitStr& v,
                                     const BitStr& w, Stage n) {
    if (w.is_empty())
        throw PreconditionError("conditional_bounds needs a nonempty continuation w");
    BitStr vw = v.concat(w);
    Ratio denom = comb_headroom(p, v, v.size(), n);
    Ratio lower = Ratio::quotient_or_zero(p.at(vw, n), denom);
    Ratio upper = Ratio::quotient_or_zero(comb_headroom(p, vw, vw.size(), n), denom);
    return ConditionalBounds{lower, upper};
}

namespace {

struct CombSpec {
    StagedPredictor p;
    BitStr target;                // vw
    std::vector<Ratio> headroom;  // headroom[j] = 1 - sum_{i<=j} p(target(i)^-)
    bool attain_upper;            // upper witness keeps headroom at the target

    // value at a node lying on the comb
    Ratio comb_value(const BitStr& t) const {
        std::size_t L = target.size();
        if (t.is_prefix_of(target)) {
            if (t.size() < L || attain_upper) return headroom[t.size()];
            return p.limit(target);
        }
        // t is target(j)^- for some j
        std::size_t j = t.size();
        if (j < L || attain_upper) return p.limit(t);
        return headroom[L - 1] - p.limit(target);
    }
};

StagedPredictor make_witness(std::shared_ptr<CombSpec> spec, bool dyadic) {
    auto limit = [spec](const BitStr& t) {
        const BitStr& target = spec->target;
        // longest prefix of t agreeing with target
        std::size_t agree = 0;
        while (agree < t.size() && agree < target.size() &&
               t.bit(agree) == target.bit(agree))
            ++agree;
        BitStr comb_node;
        if (agree == t.size()) {
            comb_node = t;  // t on the spine
        } else if (agree < target.size()) {
            comb_node = target.prefix(agree + 1).complement_last();  // left the spine here
        } else {
            comb_node = target;  // t extends the target
        }
        Ratio val = spec->comb_value(comb_node);
        // below the comb all mass follows the 0-child
        for (std::size_t i = comb_node.size(); i < t.size(); ++i)
            if (t.bit(i) != 0) return Ratio(0);
        return val;
    };
    return StagedPredictor::from_limit(limit, PredictorCaps{true, true, true, dyadic});
}

}  // namespace

std::pair<StagedPredictor, StagedPredictor> extremal_distributions(
    const StagedPredictor& p, const BitStr& v, const BitStr& w) {
    if (!p.caps().exact)
        throw PreconditionError("extremal_distributions needs an exact predictor");
    if (w.is_empty())
        throw PreconditionError("extremal_distributions needs a nonempty continuation w");
    BitStr vw = v.concat(w);
    std::vector<Ratio> headroom(vw.size() + 1);
    headroom[0] = Ratio(1);
    for (std::size_t j = 1; j <= vw.size(); ++j)
        headroom[j] = headroom[j - 1] - p.limit(vw.prefix(j).complement_last());
    if (headroom[v.size()].is_zero())
        throw PreconditionError("conditional bounds at v=" + v.str() + ", w=" + w.str() +
                                " are undefined: the bound denominator is zero");
    bool dyadic = p.caps().dyadic_valued;
    auto lo = std::make_shared<CombSpec>(CombSpec{p, vw, headroom, false});
    auto hi = std::make_shared<CombSpec>(CombSpec{p, vw, headroom, true});
    return {make_witness(lo, dyadic), make_witness(hi, dyadic)};
}

CondValue cond_probability(const StagedPredictor& p, const BitStr& x, const BitStr& y,
                           CondMode mode, Stage n) {
    bool certified = mode == CondMode::Nonterminating && p.caps().exact;
    if (mode == CondMode::Nonterminating) {
        Ratio value = Ratio::quotient_or_zero(p.at(x.concat(y), n), p.at(x, n));
        return CondValue{value, certified};
    }
    if (y.is_empty()) {
        Ratio px = p.at(x, n);
        return CondValue{Ratio::quotient_or_zero(px, px), certified};
    }
    Ratio value(1);
    for (std::size_t j = 1; j <= y.size(); ++j) {
        BitStr xy = x.concat(y.prefix(j));
        Ratio a = p.at(xy, n);
        value *= Ratio::quotient_or_zero(a, a + p.at(xy.complement_last(), n));
    }
    return CondValue{value, certified};
}

}  // namespace pred
