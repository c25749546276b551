#include <gtest/gtest.h>

#include <cmath>

#include "vixopt/power_sum.hpp"

using vixopt::PowerSum;

TEST(PowerSum, EvaluatesAndMergesExponents) {
    PowerSum p({{2.0, 1.0}, {3.0, -0.5}, {1.0, 1.0}});
    EXPECT_EQ(p.terms().size(), 2u);
    EXPECT_NEAR(p(4.0), 3.0 * 4.0 + 3.0 / 2.0, 1e-14);
}

TEST(PowerSum, DerivativesMatchFiniteDifferences) {
    PowerSum p({{0.7, -1.3}, {0.2, 0.8}, {5.0, 0.0}});
    const double y = 0.9, h = 1e-5;
    for (int k = 1; k <= 3; ++k) {
        const PowerSum d = p.derivative(k);
        const PowerSum lower = p.derivative(k - 1);
        const double fd = (lower(y + h) - lower(y - h)) / (2.0 * h);
        EXPECT_NEAR(d(y), fd, 1e-6 * std::max(1.0, std::abs(fd))) << "order " << k;
    }
}

TEST(PowerSum, ArithmeticAndShift) {
    PowerSum a({{1.0, 2.0}});
    PowerSum b({{-1.0, 2.0}, {4.0, 0.0}});
    const PowerSum c = a + b;
    EXPECT_DOUBLE_EQ(c(3.0), 4.0);
    const PowerSum s = a.shifted(-1.0);
    EXPECT_DOUBLE_EQ(s(3.0), 3.0);
    EXPECT_DOUBLE_EQ((2.0 * a - a)(5.0), 25.0);
    EXPECT_DOUBLE_EQ(PowerSum::constant(3.0)(10.0), 3.0);
}
