#include <doctest.h>

#include "helpers.hpp"
#include "pred/errors.hpp"

using namespace pred;

namespace {
const BitStr kEmpty = BitStr::empty();
}

TEST_CASE("uniform predictor") {
    auto p = uniform_predictor();
    CHECK_EQ(p.at(BitStr::parse("010"), 0), Ratio(1, 8));
    CHECK_EQ(p.at(BitStr::parse("010"), 9), Ratio(1, 8));
    CHECK_EQ(p.at(kEmpty, 0), Ratio(1));
    CHECK_EQ(redundancy(p, BitStr::parse("0110"), 3).ratio, Ratio(1));
    CHECK_EQ(redundancy(p, BitStr::parse("0110"), 3).display_log2_str(), "0.000000000");
}

TEST_CASE("bernoulli predictor") {
    auto p = bernoulli_predictor(Ratio(3, 4));
    CHECK_EQ(p.limit(BitStr::parse("11")), Ratio(9, 16));
    CHECK_EQ(bernoulli_predictor(Ratio(1, 2)).limit(BitStr::parse("0110")), Ratio(1, 16));
    CHECK_EQ(bernoulli_predictor(Ratio(1)).limit(BitStr::parse("10")), Ratio(0));
    CHECK_THROWS_AS(bernoulli_predictor(Ratio(5, 4)), PreconditionError);
    CHECK(p.caps().additive);
    CHECK(p.caps().unit_root);
    CHECK(p.caps().dyadic_valued);
    CHECK_FALSE(bernoulli_predictor(Ratio(2, 3)).caps().dyadic_valued);
    CHECK_EQ(p.conditional(BitStr::parse("1"), 1), Ratio(3, 4));
    CHECK_EQ(p.conditional(BitStr::parse("1"), 0), Ratio(1, 4));

    // redundancy of 11 under r=3/4: exact ratio 9/4, log about 1.1699
    auto rv = redundancy(p, BitStr::parse("11"), 0);
    CHECK_EQ(rv.ratio, Ratio(9, 4));
    CHECK_EQ(rv.display_log2(), doctest::Approx(1.169925001).epsilon(1e-9));
}

TEST_CASE("dirac predictor is the point mass on the periodic extension") {
    auto p = dirac_predictor(BitStr::parse("01"));
    CHECK_EQ(p.limit(BitStr::parse("0101")), Ratio(1));
    CHECK_EQ(p.limit(BitStr::parse("010")), Ratio(1));
    CHECK_EQ(p.limit(BitStr::parse("00")), Ratio(0));
    auto zeros = dirac_predictor(BitStr::parse("0"));
    CHECK_EQ(zeros.limit(BitStr::parse("0000")), Ratio(1));
    CHECK_EQ(zeros.limit(BitStr::parse("001")), Ratio(0));
    auto rv = redundancy(zeros, BitStr::parse("01"), 0);
    CHECK(rv.log_is_neg_infinity());
    CHECK_EQ(rv.display_log2_str(), "-inf");
}

TEST_CASE("table predictor validation") {
    auto entry = [](const char* s, long n, long d) {
        return std::pair{BitStr::parse(s), Ratio(n, d)};
    };
    std::map<BitStr, Ratio> ok{entry(".", 1, 1), entry("0", 1, 2), entry("1", 1, 4)};
    auto p = table_predictor(ok, TableDefault::ZeroOutside);
    CHECK_EQ(p.limit(BitStr::parse("0")), Ratio(1, 2));
    CHECK_EQ(p.limit(BitStr::parse("0110")), Ratio(0));
    CHECK_EQ(surplus(p, kEmpty, 0), Ratio(1, 4));

    std::map<BitStr, Ratio> bad{entry(".", 1, 1), entry("0", 3, 4), entry("1", 1, 2)};
    CHECK_THROWS_AS(table_predictor(bad, TableDefault::ZeroOutside), PreconditionError);

    std::map<BitStr, Ratio> no_root{entry("00", 1, 2)};
    CHECK_THROWS_AS(table_predictor(no_root, TableDefault::ZeroOutside),
                    PreconditionError);  // parent of 00 resolves to 0 < 1/2

    std::map<BitStr, Ratio> big{entry(".", 3, 2)};
    CHECK_THROWS_AS(table_predictor(big, TableDefault::ZeroOutside), PreconditionError);
}

TEST_CASE("closed_under_prefix routes mass down the zero child") {
    std::map<BitStr, Ratio> dirac{{kEmpty, Ratio(1)}};
    auto p = table_predictor(dirac, TableDefault::ClosedUnderPrefix);
    CHECK_EQ(p.limit(BitStr::parse("0000")), Ratio(1));
    CHECK_EQ(p.limit(BitStr::parse("0100")), Ratio(0));
    CHECK(p.caps().additive);
    CHECK(p.caps().unit_root);
    CHECK_EQ(surplus(p, BitStr::parse("00"), 0), Ratio(0));
}

TEST_CASE("surplus probability") {
    CHECK_EQ(surplus(uniform_predictor(), BitStr::parse("0101"), 5), Ratio(0));
    CHECK_EQ(surplus(dirac_predictor(BitStr::parse("0")), kEmpty, 0), Ratio(0));
}

TEST_CASE("staged invariants hold on constructed predictors") {
    auto gen = testing::rng(21);
    std::vector<StagedPredictor> predictors{
        uniform_predictor(), bernoulli_predictor(Ratio(3, 4)),
        dirac_predictor(BitStr::parse("10")),
        mixture({{Ratio(1, 2), uniform_predictor()},
                 {Ratio(1, 4), bernoulli_predictor(Ratio(3, 4))}}),
        testing::random_table_predictor(gen, 5, 4),
        testing::staged_ramp(testing::random_distribution(gen, 5, 5), 4),
        subadditivize([](const BitStr& x, Stage n) {
            return Ratio::pow2(-static_cast<long>(x.size())) *
                   Ratio::min(Ratio(1), Ratio(n, 3));
        })};
    for (const auto& p : predictors) {
        for (int i = 0; i < 40; ++i) {
            BitStr x = testing::random_bitstr(gen, gen() % 7);
            Stage n = gen() % 8;
            CHECK(p.at(x, n + 1) >= p.at(x, n));
            CHECK(p.at(x, n) >= p.at(x.child(0), n) + p.at(x.child(1), n));
            CHECK(p.at(x, n) <= Ratio(1));
        }
    }
}
