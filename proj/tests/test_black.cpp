#include <gtest/gtest.h>

#include <cmath>

#include "vixopt/black.hpp"
#include "vixopt/european.hpp"

using namespace vixopt;

TEST(Black, NormalCdfReferenceValues) {
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.96), 0.9750021048517795, 1e-15);
    EXPECT_NEAR(normal_cdf(-8.0), 6.22096057427178e-16, 1e-28);
}

TEST(Black, VegaIsDerivativeOfPrice) {
    const double h = 1e-6;
    const double fd = (black_call(0.2, 0.22, 0.5, 0.01, 0.8 + h) - black_call(0.2, 0.22, 0.5, 0.01, 0.8 - h)) / (2 * h);
    EXPECT_NEAR(black_vega(0.2, 0.22, 0.5, 0.01, 0.8), fd, 1e-8);
}

TEST(Black, ImpliedVolRoundTrip) {
    for (double sigma : {0.05, 0.4, 1.2, 2.0}) {
        for (double K : {0.1, 0.2, 0.35}) {
            const double c = black_call(0.2, K, 0.25, 0.01, sigma);
            if (black_vega(0.2, K, 0.25, 0.01, sigma) < 1e-6) continue;
            EXPECT_NEAR(implied_vol(c, 0.2, K, 0.25, 0.01), sigma, 1e-7 * sigma) << sigma << " " << K;
        }
    }
}

TEST(Black, ImpliedVolOutsideBandThrows) {
    const double df = std::exp(-0.01 * 0.25);
    EXPECT_THROW(implied_vol(df * 0.25, 0.2, 0.1, 0.25, 0.01), InversionError);
    EXPECT_THROW(implied_vol(-1e-3, 0.2, 0.1, 0.25, 0.01), InversionError);
}

TEST(Black, ThreeHalvesModelHasPositiveSkew) {
    const auto m = ModelSpec::a1({{1.0, 1.0}});
    const CirParams p(2.94, 17.10, 2.05);
    const std::vector<double> mny{-0.2, -0.1, 0.0, 0.1, 0.2};
    const auto curve = skew_curve(m, p, 0.25, 0.05, 0.2, mny);
    for (const auto& pt : curve) EXPECT_TRUE(pt.ok) << pt.error;
    EXPECT_GT(skew_slope(curve), 0.0);
}

TEST(Black, ReferenceValuesAndLimits) {
    // F = K, sigma sqrt(T) = 0.2, r = 0: Phi(0.1) - Phi(-0.1).
    EXPECT_NEAR(black_call(1.0, 1.0, 1.0, 0.0, 0.2), 0.0796557, 1e-7);
    EXPECT_NEAR(black_call(0.2, 0.15, 0.5, 0.03, 1e-9), std::exp(-0.015) * 0.05, 1e-15);
    EXPECT_DOUBLE_EQ(black_call(0.2, 0.25, 0.5, 0.03, 1e-9), 0.0);
    double prev = 0.0;
    for (double s : {0.1, 0.3, 0.9, 2.0}) {
        const double c = black_call(0.2, 0.22, 0.5, 0.03, s);
        EXPECT_GT(c, prev);
        prev = c;
    }
    const double c = black_call(0.2, 0.22, 0.5, 0.03, 0.8);
    EXPECT_NEAR(implied_vol(c, 0.2, 0.22, 0.5, 0.03), 0.8, 1e-8);
    EXPECT_THROW(implied_vol(std::exp(-0.015) * 0.05, 0.2, 0.15, 0.5, 0.03), InversionError);
}

TEST(Black, LowVolOfVolGivesFlatLowSkew) {
    const auto m = ModelSpec::a2({{1.0, 1.0}});
    const CirParams p(3.0, 0.68, 0.05);
    const std::vector<double> mny{-0.1, -0.05, 0.0, 0.05, 0.1};
    const auto curve = skew_curve(m, p, 0.5, 0.05, 0.2, mny);
    for (const auto& pt : curve) {
        ASSERT_TRUE(pt.ok) << pt.error;
        EXPECT_LT(pt.implied_vol, 0.1);
    }
    EXPECT_LT(std::abs(skew_slope(curve)), 0.1);
}
