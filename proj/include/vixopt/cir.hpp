#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "vixopt/power_sum.hpp"

namespace vixopt {

// Square-root factor dY = (beta - alpha Y) dt - kappa sqrt(Y) dB.
// Construction enforces positivity of the coefficients and the Feller
// condition beta >= kappa^2 / 2.
class CirParams {
public:
    CirParams(double alpha, double beta, double kappa);

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double beta() const { return beta_; }
    [[nodiscard]] double kappa() const { return kappa_; }

    // 4 beta / kappa^2
    [[nodiscard]] double degrees_of_freedom() const { return 4.0 * beta_ / (kappa_ * kappa_); }
    [[nodiscard]] double long_run_mean() const { return beta_ / alpha_; }
    [[nodiscard]] double mean(double t, double y0) const;

private:
    double alpha_;
    double beta_;
    double kappa_;
};

// Closed interval of factor levels; hi may be +infinity.
struct Interval {
    double lo;
    double hi;
};

// Law of Y_t given Y_0: scale * noncentral chi-squared(df, noncentrality).
class ChiSquareLaw {
public:
    ChiSquareLaw(double df, double noncentrality, double scale);

    [[nodiscard]] double df() const { return df_; }
    [[nodiscard]] double noncentrality() const { return lambda_; }
    [[nodiscard]] double scale() const { return scale_; }

    [[nodiscard]] double mean() const { return scale_ * (df_ + lambda_); }
    [[nodiscard]] double variance() const { return 2.0 * scale_ * scale_ * (df_ + 2.0 * lambda_); }

    [[nodiscard]] double density(double y) const;
    [[nodiscard]] double log_density(double y) const;
    [[nodiscard]] double cdf(double y) const;

    // E[(Y - EY)^k] for k in {1,2,3,4}.
    [[nodiscard]] double central_moment(int k) const;

    // E[Y^s ; lo <= Y <= hi] by the Poisson mixture of incomplete gamma
    // functions. Requires df/2 + s > 0 for every region.
    [[nodiscard]] double partial_moment(double s, Interval region) const;

    // E[g(Y) ; Y in union of regions] for a power sum g (regions disjoint).
    [[nodiscard]] double expectation(const PowerSum& g, std::span<const Interval> regions) const;

    // Levels lo <= hi with P(Y < lo) <= mass and P(Y > hi) <= mass, from the
    // Chernoff bound on the moment generating function.
    [[nodiscard]] Interval tail_bounds(double mass) const;

    template <class Rng>
    double draw(Rng& rng) const {
        long n = 0;
        if (lambda_ > 0.0) {
            std::poisson_distribution<long> poisson(0.5 * lambda_);
            n = poisson(rng);
        }
        std::gamma_distribution<double> gamma(0.5 * df_ + static_cast<double>(n), 2.0);
        return scale_ * gamma(rng);
    }

    [[nodiscard]] std::vector<double> sample(std::uint64_t seed, std::size_t n) const;

private:
    double df_;
    double lambda_;
    double scale_;
};

// Transition law of Y_t started at y0 > 0, t > 0.
[[nodiscard]] ChiSquareLaw transition_law(const CirParams& p, double t, double y0);

}  // namespace vixopt
