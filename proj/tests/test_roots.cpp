#include <gtest/gtest.h>

#include <cmath>

#include "vixopt/roots.hpp"

using namespace vixopt;

TEST(Roots, ExpandBracketFindsSignChangeBothWays) {
    const auto up = expand_bracket([](double x) { return x - 37.0; }, 1.0);
    ASSERT_TRUE(up);
    EXPECT_LE(up->lo, 37.0);
    EXPECT_GE(up->hi, 37.0);
    const auto down = expand_bracket([](double x) { return x - 1e-3; }, 1.0);
    ASSERT_TRUE(down);
    EXPECT_LE(down->lo, 1e-3);
    EXPECT_GE(down->hi, 1e-3);
    EXPECT_FALSE(expand_bracket([](double x) { return x * x + 1.0; }, 1.0, 2.0, 40));
}

TEST(Roots, NewtonBisectAgreesWithClosedForm) {
    // x^3 - 2x - 5, the classic test cubic.
    const auto f = [](double x) { return x * x * x - 2.0 * x - 5.0; };
    const auto df = [](double x) { return 3.0 * x * x - 2.0; };
    const double r = newton_bisect(f, df, 2.0, 3.0);
    EXPECT_NEAR(r, 2.0945514815423265, 1e-11);
    // A derivative pointing out of the bracket must not break convergence.
    const double r2 = newton_bisect(f, [](double) { return 1e-30; }, 2.0, 3.0);
    EXPECT_NEAR(r2, r, 1e-10);
}

TEST(Roots, BracketedRootOnSteepFunction) {
    const auto f = [](double x) { return std::exp(20.0 * (x - 0.3)) - 1.0; };
    EXPECT_NEAR(bracketed_root(f, 0.0, 1.0), 0.3, 1e-12);
    EXPECT_THROW(bracketed_root(f, 0.5, 1.0), std::exception);
}
