#include "pred/transforms.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "pred/errors.hpp"

namespace pred {

RatioInterval squeeze_eval(const StagedPredictor& p, const BitStr& x, const Ratio& eps,
                           std::uint64_t step_cap) {
    if (!p.caps().additive || !p.caps().unit_root)
        throw PreconditionError("squeeze_eval needs an additive unit-root predictor");
    std::uint64_t steps = 0;
    auto eval = [&](const BitStr& t, Stage n) {
        if (++steps > step_cap)
            throw BudgetError("squeeze_eval exceeded its step cap; input is not converging");
        return p.at(t, n);
    };
    constexpr Stage kStageCeiling = Stage{1} << 30;
    for (Stage n = 0;; n = n == 0 ? 1 : n < kStageCeiling ? n * 2 : n) {
        Ratio hi(1);  // upper bound along the path, pinned at the root
        for (std::size_t i = 0; i < x.size(); ++i) {
            BitStr sibling = x.prefix(i + 1).complement_last();
            hi -= eval(sibling, n);
        }
        Ratio lo = eval(x, n);
        if (hi - lo <= eps) return RatioInterval{lo, hi};
    }
}

StagedPredictor normalize(const StagedPredictor& p) {
    if (!p.caps().exact)
        throw PreconditionError("normalize needs an exact predictor");
    auto base = p;  // value copy shared by the closure
    auto limit = [base](const BitStr& x) {
        Ratio val(1);
        for (std::size_t i = 0; i < x.size(); ++i) {
            BitStr one_child = x.prefix(i).child(1);
            Ratio p1 = base.limit(one_child);
            val = x.bit(i) ? p1 : val - p1;
        }
        return val;
    };
    return StagedPredictor::from_limit(
        limit, PredictorCaps{true, true, true, p.caps().dyadic_valued});
}

namespace {

struct SubadditiveState {
    StagedPredictor::ApproxFn g;
    std::map<std::pair<BitStr, Stage>, Ratio> memo;
    std::mutex mu;

    Ratio h(const BitStr& x, Stage n) {
        if (n == 0) return Ratio(0);
        if (x.is_empty()) return g(x, n);
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = memo.find({x, n});
            if (it != memo.end()) return it->second;
        }
        BitStr parent = x.parent();
        Ratio hp = h(parent, n);
        Ratio v;
        if (x.last() == 0) {
            v = Ratio::min(g(x, n), hp - h(parent.child(1), n - 1));
        } else {
            v = Ratio::min(g(x, n), hp - h(parent.child(0), n));
        }
        std::lock_guard<std::mutex> lock(mu);
        memo.emplace(std::pair{x, n}, v);
        return v;
    }
};

}  // namespace

StagedPredictor subadditivize(StagedPredictor::ApproxFn g, bool dyadic_hint) {
    auto state = std::make_shared<SubadditiveState>();
    state->g = std::move(g);
    PredictorCaps caps;
    caps.dyadic_valued = dyadic_hint;
    return StagedPredictor([state](const BitStr& x, Stage n) { return state->h(x, n); },
                           caps);
}

StagedPredictor mixture(std::vector<std::pair<Ratio, StagedPredictor>> family) {
    Ratio total;
    PredictorCaps caps{true, true, true, true};
    for (const auto& [w, member] : family) {
        total += w;
        caps.additive = caps.additive && member.caps().additive;
        caps.unit_root = caps.unit_root && member.caps().unit_root;
        caps.exact = caps.exact && member.caps().exact;
        caps.dyadic_valued =
            caps.dyadic_valued && member.caps().dyadic_valued && w.is_dyadic();
    }
    if (total > Ratio(1))
        throw PreconditionError("mixture weights sum to " + total.str() + " > 1");
    caps.unit_root = caps.unit_root && total.is_one();
    auto shared = std::make_shared<std::vector<std::pair<Ratio, StagedPredictor>>>(
        std::move(family));
    if (caps.exact) {
        return StagedPredictor::from_limit(
            [shared](const BitStr& x) {
                Ratio v;
                for (const auto& [w, member] : *shared) v += w * member.limit(x);
                return v;
            },
            caps);
    }
    return StagedPredictor(
        [shared](const BitStr& x, Stage n) {
            Ratio v;
            for (const auto& [w, member] : *shared) v += w * member.at(x, n);
            return v;
        },
        caps);
}

Ratio Martingale::at(const BitStr& x) const {
    Ratio v = fn_(x);
    if (v.is_zero())
        throw PreconditionError("martingale value at " + x.str() +
                                " is zero; martingales map into the positive reals");
    return v;
}

Martingale martingale_from_predictor(const StagedPredictor& p) {
    if (!p.caps().additive || !p.caps().unit_root || !p.caps().exact)
        throw PreconditionError(
            "martingale conversion needs an exact additive unit-root predictor");
    return Martingale([p](const BitStr& x) {
        return Ratio::pow2(static_cast<long>(x.size())) * p.limit(x);
    });
}

StagedPredictor predictor_from_martingale(const Martingale& f) {
    Ratio root = f.at(BitStr::empty());  // throws if zero
    return StagedPredictor::from_limit(
        [f, root](const BitStr& x) {
            return Ratio::pow2(-static_cast<long>(x.size())) * f.at(x) / root;
        },
        PredictorCaps{true, true, true, false});
}

}  // namespace pred
