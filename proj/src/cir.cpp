#include "vixopt/cir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "vixopt/errors.hpp"

namespace vixopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogUnderflow = -745.0;

// Running state of P(a, zeta), Q(a, zeta) and d = zeta^a e^-zeta / Gamma(a+1) while the
// shape a moves in unit steps. Once d underflows it stays at zero; the Poisson weights of
// the shapes where it would matter again are far below the series cutoff.
struct IncompleteGammaState {
    double zeta;
    double p;
    double q;
    double d;

    IncompleteGammaState(double a, double z) : zeta(z) {
        if (z <= 0.0) {
            p = 0.0;
            q = 1.0;
            d = 0.0;
        } else if (std::isinf(z)) {
            p = 1.0;
            q = 0.0;
            d = 0.0;
        } else {
            if (z < a) {
                p = boost::math::gamma_p(a, z);
                q = 1.0 - p;
            } else {
                q = boost::math::gamma_q(a, z);
                p = 1.0 - q;
            }
            d = std::exp(a * std::log(z) - z - std::lgamma(a + 1.0));
        }
    }

    // a -> a + 1
    void step_up(double a) {
        if (d == 0.0) return;
        p = std::max(p - d, 0.0);
        q = std::min(q + d, 1.0);
        d *= zeta / (a + 1.0);
    }

    // a -> a - 1
    void step_down(double a) {
        if (d == 0.0) return;
        d *= a / zeta;
        p = std::min(p + d, 1.0);
        q = std::max(q - d, 0.0);
    }
};

struct MomentSeries {
    double full = 0.0;
    std::vector<double> lower;  // E[Y^s ; Y <= z_i]
    std::vector<double> upper;  // E[Y^s ; Y >= z_i]
};

// Poisson(mu) mixture over j of Gamma(half_df + j, theta) moments of order s,
// truncated at each level in `levels`.
MomentSeries moment_series(double half_df, double mu, double theta, double s,
                           std::span<const double> levels) {
    const double a_min = half_df + s;
    if (!(a_min > 0.0)) {
        throw DivergentIntegralError("moment of order " + std::to_string(s) +
                                     " diverges at the origin for df/2 = " + std::to_string(half_df));
    }
    MomentSeries out;
    out.lower.assign(levels.size(), 0.0);
    out.upper.assign(levels.size(), 0.0);

    const long j0 = mu > 0.0 ? static_cast<long>(std::floor(mu)) : 0;
    const double a0 = half_df + static_cast<double>(j0) + s;
    const double k0 = half_df + static_cast<double>(j0);
    double w0 = std::pow(theta, s) * boost::math::tgamma_ratio(a0, k0);
    if (mu > 0.0) w0 *= boost::math::gamma_p_derivative(static_cast<double>(j0) + 1.0, mu);

    std::vector<IncompleteGammaState> start;
    start.reserve(levels.size());
    for (double z : levels) start.emplace_back(a0, z / theta);

    auto accumulate = [&](double w, const std::vector<IncompleteGammaState>& st) {
        out.full += w;
        for (std::size_t i = 0; i < st.size(); ++i) {
            out.lower[i] += w * st[i].p;
            out.upper[i] += w * st[i].q;
        }
    };
    accumulate(w0, start);
    if (mu <= 0.0) return out;

    constexpr double kRel = 1e-18;
    constexpr long kMaxTerms = 10'000'000;

    {
        auto st = start;
        double w = w0;
        for (long j = j0; j < j0 + kMaxTerms; ++j) {
            const double a = half_df + static_cast<double>(j) + s;
            const double k = half_df + static_cast<double>(j);
            const double factor = mu / static_cast<double>(j + 1) * (a / k);
            w *= factor;
            for (auto& g : st) g.step_up(a);
            accumulate(w, st);
            if (factor < 1.0 && w < kRel * out.full) break;
        }
    }
    {
        auto st = start;
        double w = w0;
        for (long j = j0; j > 0; --j) {
            const double a = half_df + static_cast<double>(j) + s;
            const double a_prev = a - 1.0;
            const double k_prev = half_df + static_cast<double>(j - 1);
            const double factor = static_cast<double>(j) / mu * (k_prev / a_prev);
            w *= factor;
            for (auto& g : st) g.step_down(a);
            accumulate(w, st);
            if (factor < 1.0 && w < kRel * out.full) break;
        }
    }
    return out;
}

}  // namespace

CirParams::CirParams(double alpha, double beta, double kappa) : alpha_(alpha), beta_(beta), kappa_(kappa) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(kappa > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta) ||
        !std::isfinite(kappa)) {
        throw ModelError("CIR parameters alpha, beta, kappa must be positive and finite");
    }
    if (beta < 0.5 * kappa * kappa) {
        throw ModelError("Feller condition violated: beta = " + std::to_string(beta) +
                         " < kappa^2/2 = " + std::to_string(0.5 * kappa * kappa));
    }
}

double CirParams::mean(double t, double y0) const {
    return long_run_mean() + (y0 - long_run_mean()) * std::exp(-alpha_ * t);
}

ChiSquareLaw::ChiSquareLaw(double df, double noncentrality, double scale)
    : df_(df), lambda_(noncentrality), scale_(scale) {
    if (!(df > 0.0) || !(noncentrality >= 0.0) || !(scale > 0.0) || !std::isfinite(df) ||
        !std::isfinite(noncentrality) || !std::isfinite(scale)) {
        throw ModelError("invalid chi-squared law: need df > 0, noncentrality >= 0, scale > 0");
    }
}

ChiSquareLaw transition_law(const CirParams& p, double t, double y0) {
    if (!(t > 0.0) || !(y0 > 0.0)) throw ModelError("transition_law requires t > 0 and y0 > 0");
    const double at = p.alpha() * t;
    if (at > 700.0) throw ModelError("transition_law: exp(-alpha t) underflows for alpha t = " + std::to_string(at));
    const double k2 = p.kappa() * p.kappa();
    const double one_minus = -std::expm1(-at);
    const double scale = k2 * one_minus / (4.0 * p.alpha());
    const double lambda = y0 * std::exp(-at) / scale;
    if (!std::isfinite(lambda) || !(scale > 0.0)) {
        throw ModelError("transition_law: non-finite noncentrality for t = " + std::to_string(t));
    }
    return {p.degrees_of_freedom(), lambda, scale};
}

double ChiSquareLaw::log_density(double y) const {
    if (!(y > 0.0) || std::isinf(y)) return -kInf;
    const double x = y / scale_;
    const double nu = 0.5 * df_;
    const double mu = 0.5 * lambda_;
    const double log_x = std::log(x);
    const double log2 = std::log(2.0);

    auto log_term = [&](long j) {
        const double jd = static_cast<double>(j);
        double lt = (nu + jd - 1.0) * log_x - 0.5 * x - (nu + jd) * log2 - std::lgamma(nu + jd);
        if (mu > 0.0) lt += -mu + jd * std::log(mu) - std::lgamma(jd + 1.0);
        return lt;
    };

    if (mu <= 0.0) return log_term(0) - std::log(scale_);

    // Largest term of the Poisson-gamma series: ratio mu x / 2 / ((j+1)(nu+j)) = 1.
    const double b = nu + 1.0;
    const double disc = b * b - 4.0 * (nu - 0.5 * mu * x);
    long jstar = 0;
    if (disc > 0.0) jstar = std::max(0L, static_cast<long>(std::floor(0.5 * (-b + std::sqrt(disc)))));

    const double peak = log_term(jstar);
    double sum = 1.0;
    constexpr double kRel = 1e-17;
    double rel = 1.0;
    for (long j = jstar;; ++j) {
        rel *= mu / static_cast<double>(j + 1) * (0.5 * x) / (nu + static_cast<double>(j));
        sum += rel;
        if (rel < kRel * sum || j - jstar > 10'000'000) break;
    }
    rel = 1.0;
    for (long j = jstar; j > 0; --j) {
        rel *= static_cast<double>(j) / mu * (nu + static_cast<double>(j) - 1.0) / (0.5 * x);
        sum += rel;
        if (rel < kRel * sum) break;
    }
    return peak + std::log(sum) - std::log(scale_);
}

double ChiSquareLaw::density(double y) const {
    const double ld = log_density(y);
    if (ld < kLogUnderflow) return 0.0;
    return std::exp(ld);
}

double ChiSquareLaw::cdf(double y) const {
    if (!(y > 0.0)) return 0.0;
    if (std::isinf(y)) return 1.0;
    return partial_moment(0.0, {0.0, y});
}

double ChiSquareLaw::central_moment(int k) const {
    const double c = scale_;
    const double k2 = 2.0 * c * c * (df_ + 2.0 * lambda_);
    switch (k) {
        case 1:
            return 0.0;
        case 2:
            return k2;
        case 3:
            return 8.0 * c * c * c * (df_ + 3.0 * lambda_);
        case 4:
            return 48.0 * c * c * c * c * (df_ + 4.0 * lambda_) + 3.0 * k2 * k2;
        default:
            throw std::invalid_argument("central_moment: order must be 1, 2, 3 or 4");
    }
}

double ChiSquareLaw::partial_moment(double s, Interval region) const {
    const double lo = std::max(region.lo, 0.0);
    const double hi = region.hi;
    if (!(hi > lo)) return 0.0;
    const double theta = 2.0 * scale_;
    const double half_df = 0.5 * df_;
    const double mu = 0.5 * lambda_;

    if (lo == 0.0 && std::isinf(hi)) return moment_series(half_df, mu, theta, s, {}).full;
    if (lo == 0.0) {
        const double lv[] = {hi};
        return moment_series(half_df, mu, theta, s, lv).lower[0];
    }
    if (std::isinf(hi)) {
        const double lv[] = {lo};
        return moment_series(half_df, mu, theta, s, lv).upper[0];
    }
    const double lv[] = {lo, hi};
    const auto r = moment_series(half_df, mu, theta, s, lv);
    // Difference the tail that is small at both ends to avoid cancellation.
    if (lo > mean()) return std::max(r.upper[0] - r.upper[1], 0.0);
    return std::max(r.lower[1] - r.lower[0], 0.0);
}

double ChiSquareLaw::expectation(const PowerSum& g, std::span<const Interval> regions) const {
    double total = 0.0;
    for (const auto& term : g.terms()) {
        for (const auto& region : regions) total += term.coef * partial_moment(term.exponent, region);
    }
    return total;
}

Interval ChiSquareLaw::tail_bounds(double mass) const {
    if (!(mass > 0.0 && mass < 1.0)) throw std::invalid_argument("tail_bounds: mass must lie in (0,1)");
    const double log_mass = std::log(mass);
    const double df = df_;
    const double lam = lambda_;
    // Optimized Chernoff exponent for the unscaled variable X at level x.
    auto log_bound = [&](double x) {
        const double s = lam > 0.0 ? (-df + std::sqrt(df * df + 4.0 * lam * x)) / (2.0 * lam) : x / df;
        const double theta = 0.5 * (1.0 - 1.0 / s);
        return -theta * x + lam * theta * s + 0.5 * df * std::log(s);
    };
    const double m = df + lam;
    const double sd = std::sqrt(2.0 * (df + 2.0 * lam));

    double hi = m + sd;
    while (log_bound(hi) > log_mass) hi += 2.0 * (hi - m);
    double lo_b = m;
    for (int i = 0; i < 200 && hi - lo_b > 1e-10 * hi; ++i) {
        const double mid = 0.5 * (lo_b + hi);
        (log_bound(mid) > log_mass ? lo_b : hi) = mid;
    }

    double a = 0.0;
    double b = m;
    for (int i = 0; i < 200 && b - a > 1e-12 * m; ++i) {
        const double mid = 0.5 * (a + b);
        (log_bound(mid) > log_mass ? b : a) = mid;
    }
    return {scale_ * a, scale_ * hi};
}

std::vector<double> ChiSquareLaw::sample(std::uint64_t seed, std::size_t n) const {
    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = draw(rng);
    return out;
}

}  // namespace vixopt
