#include <doctest.h>

#include "helpers.hpp"
#include "pred/constructions.hpp"
#include "pred/errors.hpp"
#include "pred/transforms.hpp"

using namespace pred;

TEST_CASE("adversary thresholds sit strictly inside their interval") {
    for (std::size_t n = 0; n <= 6; ++n) {
        Dyadic t = adversary_threshold(n);
        CHECK(t.to_ratio() > Ratio(1, 2));
        // t < 2^(2^-n - 1), checked exactly as t^(2^n) < 2^(1 - 2^n)
        unsigned long M = 1ul << n;
        mpz_class lhs;
        mpz_pow_ui(lhs.get_mpz_t(), t.to_ratio().numerator().get_mpz_t(), M);
        mpz_class rhs(1);
        rhs <<= (t.exponent() * M - M + 1);
        CHECK(lhs < rhs);
    }
}

TEST_CASE("adversary against uniform walks the zero path with ratio 1") {
    auto trace = adversarial_sequence(uniform_predictor(), 16);
    CHECK_EQ(trace.sequence, BitStr::parse(std::string(16, '0')));
    CHECK(trace.verify(uniform_predictor()));
    for (std::size_t n = 1; n <= 16; ++n) {
        Ratio ratio = Ratio::pow2(static_cast<long>(n)) *
                      uniform_predictor().limit(trace.sequence.prefix(n));
        CHECK_EQ(ratio, Ratio(1));
        CHECK(ratio < Ratio(4));
    }
}

TEST_CASE("adversary against a biased coin") {
    auto p = bernoulli_predictor(Ratio(3, 4));
    auto trace = adversarial_sequence(p, 16);
    CHECK_EQ(trace.sequence, BitStr::parse(std::string(16, '0')));
    CHECK(trace.verify(p));
}

TEST_CASE("adversary certificates hold for positive mixtures") {
    auto gen = testing::rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        auto mix = mixture({{Ratio(1, 2), uniform_predictor()},
                            {Ratio(1, 4), bernoulli_predictor(Ratio(
                                              1 + static_cast<long>(gen() % 6), 8))},
                            {Ratio(1, 8), testing::random_positive_distribution(gen, 6)}});
        auto trace = adversarial_sequence(mix, 32);
        CHECK(trace.verify(mix));
        // bounded redundancy: the ratio never reaches 4 p(empty)
        for (std::size_t n = 1; n <= 32; ++n) {
            Ratio ratio =
                Ratio::pow2(static_cast<long>(n)) * mix.limit(trace.sequence.prefix(n));
            CHECK(ratio < Ratio(4) * mix.limit(BitStr::empty()));
        }
    }
}

TEST_CASE("adversary is deterministic") {
    auto p = mixture({{Ratio(1, 2), uniform_predictor()},
                      {Ratio(1, 2), bernoulli_predictor(Ratio(5, 8))}});
    auto a = adversarial_sequence(p, 24);
    auto b = adversarial_sequence(p, 24);
    CHECK_EQ(a.sequence, b.sequence);
    REQUIRE_EQ(a.steps.size(), b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK_EQ(a.steps[i].child_value, b.steps[i].child_value);
        CHECK_EQ(a.steps[i].bound, b.steps[i].bound);
    }
}

TEST_CASE("adversary reports non-separating inputs as budget errors") {
    // claims to be exact but is wildly superadditive: neither child ever
    // falls below the threshold
    auto liar = StagedPredictor::from_limit([](const BitStr&) { return Ratio(1); },
                                            PredictorCaps{false, false, true, true});
    CHECK_THROWS_AS(adversarial_sequence(liar, 4), BudgetError);
}

TEST_CASE("adversary rejects predictors with zeros") {
    CHECK_THROWS_AS(adversarial_sequence(dirac_predictor(BitStr::parse("0")), 4),
                    PreconditionError);
}

TEST_CASE("trace_recursive_path finds certified high-probability paths") {
    // point mass on 0101...: only its prefixes certify above 1/2
    auto dirac = dirac_predictor(BitStr::parse("01"));
    auto found = trace_recursive_path(dirac, BitStr::empty(), 1, 6, 10000);
    REQUIRE(found.has_value());
    CHECK_EQ(*found, BitStr::parse("010101"));

    // uniform mass is too small everywhere
    CHECK_FALSE(
        trace_recursive_path(uniform_predictor(), BitStr::empty(), 1, 2, 10000).has_value());

    auto mix = mixture({{Ratio(1, 2), dirac_predictor(BitStr::parse("0"))},
                        {Ratio(1, 2), uniform_predictor()}});
    auto traced = trace_recursive_path(mix, BitStr::empty(), 2, 4, 10000);
    REQUIRE(traced.has_value());
    CHECK_EQ(*traced, BitStr::parse("0000"));
    // soundness: the returned string really carries the certified bound
    CHECK(mix.at(*traced, 64) > Ratio(1, 4));

    // seed deeper than the target: nothing to search
    CHECK_FALSE(trace_recursive_path(mix, BitStr::parse("00000"), 1, 3, 100).has_value());
}
