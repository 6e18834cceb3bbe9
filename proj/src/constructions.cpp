#include "pred/constructions.hpp"

#include "pred/errors.hpp"

namespace pred {

Dyadic adversary_threshold(std::size_t n) {
    // (2^(n+2) + 1) * 2^-(n+3)
    mpz_class mant;
    mpz_ui_pow_ui(mant.get_mpz_t(), 2, static_cast<unsigned long>(n + 2));
    mant += 1;
    return Dyadic(mant, static_cast<unsigned long>(n + 3));
}

bool AdversaryTrace::verify(const StagedPredictor& p) const {
    Ratio root = p.limit(BitStr::empty());
    for (std::size_t n = 0; n < steps.size(); ++n) {
        const AdversaryStep& step = steps[n];
        BitStr prefix = sequence.prefix(n + 1);
        if (step.digit != prefix.last()) return false;
        Ratio parent = p.limit(sequence.prefix(n));
        Ratio child = p.limit(prefix);
        if (parent != step.parent_value || child != step.child_value) return false;
        if (!(child < parent * step.threshold.to_ratio())) return false;
        Ratio lhs = Ratio::pow2(static_cast<long>(n + 1)) * child;
        if (!(lhs < root * step.bound.to_ratio())) return false;
        if (!(step.bound.to_ratio() < Ratio(4))) return false;
    }
    return true;
}

AdversaryTrace adversarial_sequence(const StagedPredictor& p, std::size_t n_target) {
    if (!p.caps().exact)
        throw PreconditionError("adversarial_sequence needs an exact predictor");
    AdversaryTrace trace;
    Ratio parent = p.limit(BitStr::empty());
    if (parent.is_zero())
        throw PreconditionError("adversarial_sequence needs a nonvanishing predictor; "
                                "p is zero at the root");
    Dyadic bound = Dyadic::pow2(0);  // running 2^n * product of thresholds
    for (std::size_t n = 0; n < n_target; ++n) {
        Dyadic threshold = adversary_threshold(n);
        Ratio cutoff = parent * threshold.to_ratio();
        Bit chosen = -1;
        Ratio child_value;
        for (Bit u : {0, 1}) {
            Ratio child = p.limit(trace.sequence.child(u));
            if (child < cutoff) {
                chosen = u;
                child_value = child;
                break;
            }
        }
        if (chosen < 0)
            throw BudgetError(
                "adversarial_sequence could not separate the children at step " +
                std::to_string(n) + "; the input violates its predictor contract");
        if (child_value.is_zero())
            throw PreconditionError(
                "adversarial_sequence needs a nonvanishing predictor; p is zero at " +
                trace.sequence.child(chosen).str());
        bound = bound * threshold;              // 2^n prod t_i -> 2^n prod t_(i<=n)
        bound = bound + bound;                  // times 2 for the new digit
        trace.sequence.push_back(chosen);
        trace.steps.push_back(AdversaryStep{chosen, parent, child_value, threshold, bound});
        parent = child_value;
    }
    return trace;
}

std::optional<BitStr> trace_recursive_path(const StagedPredictor& p, const BitStr& seed,
                                           int c, std::size_t target_length,
                                           std::uint64_t budget) {
    if (seed.size() > target_length) return std::nullopt;
    Ratio cut = Ratio::pow2(-c);
    std::size_t extend = target_length - seed.size();
    if (extend > 62)
        throw PreconditionError("trace_recursive_path supports at most 62 free digits");
    for (Stage stage = 1;; ++stage) {
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << extend); ++idx) {
            if (budget == 0) return std::nullopt;
            --budget;
            BitStr x = seed.concat(BitStr::from_index(extend, idx));
            if (p.at(x, stage) > cut) return x;
        }
    }
}

}  // namespace pred
