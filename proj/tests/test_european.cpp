#include <gtest/gtest.h>

#include <cmath>

#include "vixopt/european.hpp"
#include "vixopt/integration.hpp"

using namespace vixopt;

namespace {

const CirParams kFig1(2.94, 17.10, 2.05);
const auto kThreeHalves = ModelSpec::a1({{1.0, 1.0}});

}  // namespace

TEST(European, SeriesAndAdaptiveQuadratureAgree) {
    QuadratureConfig adaptive;
    adaptive.method = QuadratureMethod::Adaptive;
    const OptionSpec o{0.15, 1.0, 0.05, OptionKind::Call};
    for (double x : {0.1, 0.2, 0.35}) {
        const double s = european_price(kThreeHalves, kFig1, o, 0.0, x);
        const double a = european_price(kThreeHalves, kFig1, o, 0.0, x, adaptive);
        EXPECT_NEAR(s, a, 1e-9) << x;
    }
}

TEST(European, CallPutParityThroughFutures) {
    const CirParams p(3.0, 0.68, 1.0);
    const auto m = ModelSpec::a2({{0.5, 1.0}, {0.5, 0.8}});
    for (double K : {0.1, 0.2, 0.3}) {
        const OptionSpec call{K, 0.75, 0.05, OptionKind::Call};
        const OptionSpec put{K, 0.75, 0.05, OptionKind::Put};
        const double c = european_price(m, p, call, 0.25, 0.2);
        const double q = european_price(m, p, put, 0.25, 0.2);
        const double F = futures_price(m, p, 0.5, 0.2);
        EXPECT_NEAR(c - q, std::exp(-0.05 * 0.5) * (F - K), 1e-11) << K;
    }
}

TEST(European, FuturesOfHalfModelIsAffine) {
    const CirParams p(3.0, 0.68, 1.0);
    const auto m = ModelSpec::a2({{1.0, 1.0}});
    for (double T : {0.0, 0.3, 2.0}) EXPECT_NEAR(futures_price(m, p, T, 0.2), p.mean(T, 0.2), 1e-13);
}

TEST(European, FuturesTaylorIsCloseForShortMaturity) {
    const double T = 0.1;
    const double fq = futures_price(kThreeHalves, kFig1, T, 0.2);
    const double ft = futures_taylor(kThreeHalves, kFig1, T, 0.2);
    EXPECT_LT(std::abs(ft - fq) / fq, 1e-3);
}

TEST(European, KernelAtZeroIsMinusHOnExerciseSet) {
    const PricingProblem prob(kThreeHalves, kFig1, {0.15, 1.0, 0.05, OptionKind::Call});
    EXPECT_DOUBLE_EQ(eep_kernel(prob, 0.0, 0.4, 0.3), -prob.big_h(0.4));
    EXPECT_DOUBLE_EQ(eep_kernel(prob, 0.0, 0.2, 0.3), 0.0);
    // Continuity as u decreases to zero from inside the exercise set.
    EXPECT_NEAR(eep_kernel(prob, 1e-7, 0.4, 0.3), -prob.big_h(0.4), 1e-3);
}

TEST(European, PayoffRegionOfMixtureHasTwoPieces) {
    const auto mix = ModelSpec::mixture({{0.07, 1.0}}, {{0.07, 1.0}});
    const auto r = payoff_factor_region(mix, OptionKind::Call, 0.15);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(mix.f(r[0].hi), 0.15, 1e-12);
    EXPECT_NEAR(mix.f(r[1].lo), 0.15, 1e-12);
    EXPECT_TRUE(std::isinf(r[1].hi));
}

TEST(European, DegenerateHorizonAndStrike) {
    const OptionSpec o{0.15, 1.0, 0.05, OptionKind::Call};
    EXPECT_DOUBLE_EQ(european_price(kThreeHalves, kFig1, o, 1.0, 0.2), 0.05);
    EXPECT_DOUBLE_EQ(european_price(kThreeHalves, kFig1, o, 1.0, 0.1), 0.0);
    const OptionSpec tiny{1e-12, 1.0, 0.05, OptionKind::Call};
    const double F = futures_price(kThreeHalves, kFig1, 0.6, 0.2);
    EXPECT_NEAR(european_price(kThreeHalves, kFig1, tiny, 0.4, 0.2), std::exp(-0.05 * 0.6) * F, 1e-11);
}

TEST(European, TaylorLimits) {
    const CirParams p(3.0, 0.68, 1.0);
    const auto m = ModelSpec::a2({{1.0, 1.0}});
    EXPECT_NEAR(futures_taylor(m, p, 0.7, 0.2), futures_price(m, p, 0.7, 0.2), 1e-14);
    EXPECT_NEAR(futures_taylor(kThreeHalves, kFig1, 1e-9, 0.2), 0.2, 1e-9);
    const double fq = futures_price(kThreeHalves, kFig1, 1.0, 0.2);
    EXPECT_LE(std::abs(futures_taylor(kThreeHalves, kFig1, 1.0, 0.2) - fq) / fq, 0.01);
}

TEST(European, KernelVanishesOnEmptyExerciseSets) {
    const PricingProblem prob(kThreeHalves, kFig1, {0.15, 1.0, 0.05, OptionKind::Call});
    EXPECT_NEAR(eep_kernel(prob, 0.5, 0.3, 1e6), 0.0, 1e-15);
    const PricingProblem mix(ModelSpec::mixture({{0.07, 1.0}}, {{0.07, 1.0}}), CirParams(1.0, 2.0, 1.0),
                             {0.15, 1.0, 0.05, OptionKind::Call});
    EXPECT_NEAR(eep_kernel(mix, 0.5, 1.0, 1e-8, 1e8), 0.0, 1e-12);
}
