#include <doctest.h>

#include <functional>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pred/conditional.hpp"
#include "pred/errors.hpp"

using namespace pred;

namespace {

const BitStr kEmpty = BitStr::empty();

StagedPredictor zero_predictor() {
    return table_predictor({}, TableDefault::ZeroOutside);
}

}  // namespace

TEST_CASE("conditional bounds on the worked examples") {
    auto at = [](const StagedPredictor& p, const char* v, const char* w) {
        return conditional_bounds(p, BitStr::parse(v), BitStr::parse(w), 0);
    };
    auto u = at(uniform_predictor(), ".", "1");
    CHECK_EQ(u.lower, Ratio(1, 2));
    CHECK_EQ(u.upper, Ratio(1, 2));

    auto z = at(zero_predictor(), ".", "1");
    CHECK_EQ(z.lower, Ratio(0));
    CHECK_EQ(z.upper, Ratio(1));

    auto quarter = StagedPredictor::from_limit(
        [](const BitStr& x) { return Ratio::pow2(-2 * static_cast<long>(x.size())); },
        PredictorCaps{false, true, true, true});
    auto q = at(quarter, ".", "1");
    CHECK_EQ(q.lower, Ratio(1, 4));
    CHECK_EQ(q.upper, Ratio(3, 4));

    CHECK_THROWS_AS(conditional_bounds(uniform_predictor(), kEmpty, kEmpty, 0),
                    PreconditionError);
}

TEST_CASE("bounds match the brute-force comb oracle exactly") {
    auto gen = testing::rng(41);
    int combs_checked = 0;
    for (int trial = 0; trial < 25; ++trial) {
        auto p = testing::random_table_predictor(gen, 3, 3);  // 1/8 grid
        for (int c = 0; c < 4; ++c) {
            std::size_t total = 1 + gen() % 3;
            std::size_t vlen = gen() % total;
            BitStr target = testing::random_bitstr(gen, total);
            BitStr v = target.prefix(vlen);
            BitStr w;
            for (std::size_t i = vlen; i < total; ++i) w.push_back(target.bit(i));
            auto bounds = conditional_bounds(p, v, w, 0);
            auto oracle = testing::comb_brute_force(p, v, w, 3);
            REQUIRE(oracle.any);
            CHECK_EQ(bounds.lower, oracle.min);
            CHECK_EQ(bounds.upper, oracle.max);
            ++combs_checked;
        }
    }
    CHECK(combs_checked >= 100);
}

TEST_CASE("staged bounds tighten monotonically") {
    auto gen = testing::rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        auto table = testing::random_distribution(gen, 4, 4);
        auto staged = testing::staged_ramp(table, 6);
        BitStr target = testing::random_bitstr(gen, 1 + gen() % 4);
        std::size_t vlen = gen() % target.size();
        BitStr v = target.prefix(vlen);
        BitStr w;
        for (std::size_t i = vlen; i < target.size(); ++i) w.push_back(target.bit(i));
        auto prev = conditional_bounds(staged, v, w, 1);
        CHECK(prev.lower <= prev.upper);
        for (Stage n = 2; n <= 8; ++n) {
            auto cur = conditional_bounds(staged, v, w, n);
            CHECK(cur.lower >= prev.lower);
            CHECK(cur.upper <= prev.upper);
            CHECK(cur.lower <= cur.upper);
            prev = cur;
        }
    }
}

TEST_CASE("extremal witnesses attain the bounds") {
    auto check_witnesses = [](const StagedPredictor& p, const char* vs, const char* ws) {
        BitStr v = BitStr::parse(vs), w = BitStr::parse(ws);
        BitStr vw = v.concat(w);
        auto bounds = conditional_bounds(p, v, w, 0);
        auto [lo, hi] = extremal_distributions(p, v, w);
        for (const StagedPredictor* witness : {&lo, &hi}) {
            CHECK_EQ(witness->limit(BitStr::empty()), Ratio(1));
            // exact additivity everywhere we look
            for (const BitStr& x : all_strings_up_to(vw.size() + 1))
                CHECK_EQ(witness->limit(x),
                         witness->limit(x.child(0)) + witness->limit(x.child(1)));
            // domination on the comb
            for (std::size_t j = 1; j <= vw.size(); ++j) {
                CHECK(witness->limit(vw.prefix(j)) >= p.limit(vw.prefix(j)));
                CHECK(witness->limit(vw.prefix(j).complement_last()) >=
                      p.limit(vw.prefix(j).complement_last()));
            }
        }
        CHECK_EQ(Ratio::quotient_or_zero(lo.limit(vw), lo.limit(v)), bounds.lower);
        CHECK_EQ(Ratio::quotient_or_zero(hi.limit(vw), hi.limit(v)), bounds.upper);
    };

    check_witnesses(uniform_predictor(), ".", "1");
    auto quarter = StagedPredictor::from_limit(
        [](const BitStr& x) { return Ratio::pow2(-2 * static_cast<long>(x.size())); },
        PredictorCaps{false, true, true, true});
    check_witnesses(quarter, ".", "1");
    check_witnesses(quarter, "0", "11");
    check_witnesses(zero_predictor(), "0", "1");

    auto gen = testing::rng(43);
    for (int trial = 0; trial < 15; ++trial) {
        auto p = testing::random_table_predictor(gen, 3, 3);
        BitStr target = testing::random_bitstr(gen, 1 + gen() % 3);
        std::size_t vlen = gen() % target.size();
        BitStr w;
        for (std::size_t i = vlen; i < target.size(); ++i) w.push_back(target.bit(i));
        check_witnesses(p, target.prefix(vlen).str().c_str(), w.str().c_str());
    }
}

TEST_CASE("conditional probabilities under both interpretations") {
    auto u = uniform_predictor();
    CHECK_EQ(cond_probability(u, BitStr::parse("0"), BitStr::parse("1"),
                              CondMode::Nonterminating, 0)
                 .value,
             Ratio(1, 2));
    CHECK_EQ(cond_probability(u, BitStr::parse("0"), BitStr::parse("1"),
                              CondMode::Halting, 0)
                 .value,
             Ratio(1, 2));

    // empty continuation in halting mode: p(x)/p(x)
    CHECK_EQ(cond_probability(bernoulli_predictor(Ratio(2, 3)), BitStr::parse("01"),
                              kEmpty, CondMode::Halting, 0)
                 .value,
             Ratio(1));
    CHECK_EQ(cond_probability(zero_predictor(), BitStr::parse("01"), kEmpty,
                              CondMode::Halting, 0)
                 .value,
             Ratio(0));

    std::map<BitStr, Ratio> halting{{kEmpty, Ratio(1)},
                                    {BitStr::parse("0"), Ratio(1, 2)},
                                    {BitStr::parse("00"), Ratio(1, 2)},
                                    {BitStr::parse("01"), Ratio(0)},
                                    {BitStr::parse("1"), Ratio(0)}};
    auto t = table_predictor(halting, TableDefault::ZeroOutside);
    CHECK_EQ(cond_probability(t, BitStr::parse("0"), BitStr::parse("0"),
                              CondMode::Halting, 0)
                 .value,
             Ratio(1));

    // surplus mass makes the halting chain differ from the plain quotient
    auto nonterm = cond_probability(t, kEmpty, BitStr::parse("00"),
                                    CondMode::Nonterminating, 0);
    auto halt = cond_probability(t, kEmpty, BitStr::parse("00"), CondMode::Halting, 0);
    CHECK_EQ(nonterm.value, Ratio(1, 2));
    CHECK_EQ(halt.value, Ratio(1));
    CHECK(nonterm.certified);
    CHECK_FALSE(halt.certified);
}
