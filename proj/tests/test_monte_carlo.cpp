#include <gtest/gtest.h>

#include <cmath>

#include "vixopt/american.hpp"
#include "vixopt/european.hpp"
#include "vixopt/monte_carlo.hpp"

using namespace vixopt;

TEST(MonteCarlo, SameSeedIsBitIdentical) {
    const auto m = ModelSpec::a1({{1.0, 1.0}});
    const CirParams p(2.94, 17.10, 2.05);
    const OptionSpec o{0.15, 1.0, 0.05, OptionKind::Call};
    const auto a = mc_european(m, p, o, 0.0, 0.2, 50000, 99);
    const auto b = mc_european(m, p, o, 0.0, 0.2, 50000, 99);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    const auto c = mc_european(m, p, o, 0.0, 0.2, 50000, 100);
    EXPECT_NE(a.mean, c.mean);
    EXPECT_NE(batch_seed(1, 0), batch_seed(1, 1));
}

TEST(MonteCarlo, EuropeanMatchesQuadrature) {
    const auto m = ModelSpec::mixture({{0.07, 1.0}}, {{0.07, 1.0}});
    const CirParams p(1.0, 2.0, 1.0);
    const OptionSpec o{0.15, 1.0, 0.05, OptionKind::Call};
    const auto est = mc_european(m, p, o, 0.0, 1.0, 200000, 5);
    EXPECT_LT(std::abs(est.mean - european_price(m, p, o, 0.0, 1.0)), 4.0 * est.std_error);
}

TEST(MonteCarlo, SteppedFuturesAgreeWithOneStep) {
    const auto m = ModelSpec::a1({{1.0, 1.2}});
    const CirParams p(3.64, 17.10, 2.05);
    const double F = futures_price(m, p, 0.5, 0.2);
    const auto one = mc_futures(m, p, 0.5, 0.2, 100000, 3);
    const auto many = mc_futures_stepped(m, p, 0.5, 0.2, 100000, 20, 3);
    EXPECT_LT(std::abs(one.mean - F), 4.0 * one.std_error);
    EXPECT_LT(std::abs(many.mean - F), 4.0 * many.std_error);
}

TEST(MonteCarlo, KernelMatchesSeries) {
    const PricingProblem prob(ModelSpec::a1({{1.0, 1.0}}), CirParams(2.94, 17.10, 2.05),
                              {0.15, 1.0, 0.05, OptionKind::Call});
    const double z = 0.3;
    const double k = eep_kernel(prob, 0.2, 0.25, 0.0, z);
    const auto est = mc_eep_kernel(prob, 0.2, 0.25, 0.0, z, 200000, 8);
    EXPECT_LT(std::abs(est.mean - k), 4.0 * est.std_error + 1e-12);
}

TEST(MonteCarlo, RejectsTinySamples) {
    const auto m = ModelSpec::a2({{1.0, 1.0}});
    const CirParams p(3.0, 0.68, 1.0);
    EXPECT_THROW(mc_futures(m, p, 1.0, 0.2, 10, 1), std::invalid_argument);
}

TEST(MonteCarlo, DegenerateHorizonsAreExact) {
    const auto m = ModelSpec::a1({{1.0, 1.0}});
    const CirParams p(2.94, 17.10, 2.05);
    const OptionSpec o{0.15, 1.0, 0.05, OptionKind::Call};
    const auto e = mc_european(m, p, o, 1.0, 0.2, 5000, 1);
    EXPECT_DOUBLE_EQ(e.mean, 0.05);
    EXPECT_DOUBLE_EQ(e.std_error, 0.0);
    const auto f = mc_futures(m, p, 0.0, 0.2, 5000, 1);
    EXPECT_DOUBLE_EQ(f.mean, 0.2);
    EXPECT_DOUBLE_EQ(f.std_error, 0.0);
}

TEST(MonteCarlo, StandardErrorScalesWithRootN) {
    const auto m = ModelSpec::a1({{1.0, 1.0}});
    const CirParams p(2.94, 17.10, 2.05);
    const OptionSpec o{0.15, 1.0, 0.05, OptionKind::Call};
    const auto a = mc_european(m, p, o, 0.0, 0.2, 50000, 1);
    const auto b = mc_european(m, p, o, 0.0, 0.2, 200000, 1);
    EXPECT_NEAR(b.std_error / a.std_error, 0.5, 0.1);
}

TEST(MonteCarlo, HalfModelFuturesMatchCirMean) {
    const auto m = ModelSpec::a2({{1.0, 1.0}});
    const CirParams p(3.0, 0.68, 1.0);
    const auto est = mc_futures(m, p, 0.8, 0.2, 200000, 4);
    EXPECT_LT(std::abs(est.mean - p.mean(0.8, 0.2)), 3.0 * est.std_error);
    const auto stepped = mc_futures_stepped(m, p, 0.8, 0.2, 200000, 100, 5);
    EXPECT_LT(std::abs(est.mean - stepped.mean), 3.0 * std::hypot(est.std_error, stepped.std_error));
}

TEST(MonteCarlo, ThreeHalvesEuropeanAtMillionPaths) {
    const auto m = ModelSpec::a1({{1.0, 1.0}});
    const CirParams p(2.94, 17.10, 2.05);
    const OptionSpec o{0.15, 1.0, 0.05, OptionKind::Call};
    const auto est = mc_european(m, p, o, 0.0, 0.2, 1000000, 2);
    EXPECT_LT(std::abs(est.mean - european_price(m, p, o, 0.0, 0.2)), 3.0 * est.std_error);
}

TEST(MonteCarlo, KernelAtThreeHalvesParameters) {
    const PricingProblem prob(ModelSpec::a1({{1.0, 1.0}}), CirParams(2.94, 17.10, 2.05),
                              {0.15, 1.0, 0.05, OptionKind::Call});
    const double k = eep_kernel(prob, 0.5, 0.3, 0.3);
    const auto est = mc_eep_kernel(prob, 0.5, 0.3, 0.0, 0.3, 400000, 21);
    EXPECT_LT(std::abs(est.mean - k), 3.0 * est.std_error);
}

TEST(MonteCarlo, PolicyEstimateProperties) {
    const PricingProblem prob(ModelSpec::a1({{1.0, 1.0}}), CirParams(2.94, 17.10, 2.05),
                              {0.15, 1.0, 0.05, OptionKind::Call});
    SolverConfig cfg;
    cfg.n_steps = 50;
    const Boundary b = solve_boundary(prob, cfg);
    const double deep = 1.5 * b.upper.front();
    const auto stop = mc_american_policy(prob, b, 0.0, deep, 5000, 50, 3);
    EXPECT_DOUBLE_EQ(stop.estimate.mean, deep - 0.15);
    EXPECT_DOUBLE_EQ(stop.estimate.std_error, 0.0);
    const auto am = mc_american_policy(prob, b, 0.0, 0.2, 50000, 50, 3);
    const auto eu = mc_european(prob.model(), prob.cir(), prob.option(), 0.0, 0.2, 50000, 3);
    EXPECT_GE(am.estimate.mean, eu.mean - 3.0 * eu.std_error);
    EXPECT_GE(am.bias_indicator, 0.0);
}
