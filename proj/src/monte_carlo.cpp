#include "vixopt/monte_carlo.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace vixopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        const double tot = n + o.n;
        const double d = o.mean - mean;
        mean += d * o.n / tot;
        m2 += o.m2 + d * d * n * o.n / tot;
        n = tot;
    }
};

template <class PathFn>
McEstimate run(std::size_t n, std::uint64_t seed, PathFn path) {
    Moments total;
    const std::size_t batches = (n + kMcBatch - 1) / kMcBatch;
    for (std::size_t b = 0; b < batches; ++b) {
        std::mt19937_64 rng(batch_seed(seed, b));
        const std::size_t count = std::min(kMcBatch, n - b * kMcBatch);
        Moments mb;
        for (std::size_t i = 0; i < count; ++i) mb.add(path(rng));
        total.merge(mb);
    }
    McEstimate e;
    e.mean = total.mean;
    e.std_error = total.n > 1.0 ? std::sqrt(total.m2 / (total.n - 1.0) / total.n) : 0.0;
    e.n_paths = n;
    e.seed = seed;
    return e;
}

McEstimate exact(double v, std::size_t n, std::uint64_t seed) { return {v, 0.0, n, seed}; }

void check_n(std::size_t n) {
    if (n < 1000) throw std::invalid_argument("Monte Carlo estimates need at least 1000 paths");
}

// One exact step of the factor over a fixed dt, reusing the coefficients.
class Stepper {
public:
    Stepper(const CirParams& p, double dt)
        : df_(p.degrees_of_freedom()), decay_(std::exp(-p.alpha() * dt)),
          scale_(p.kappa() * p.kappa() * -std::expm1(-p.alpha() * dt) / (4.0 * p.alpha())) {}

    template <class Rng>
    double operator()(double y, Rng& rng) const {
        const double lambda = y * decay_ / scale_;
        long k = 0;
        if (lambda > 0.0) k = std::poisson_distribution<long>(0.5 * lambda)(rng);
        return scale_ * std::gamma_distribution<double>(0.5 * df_ + static_cast<double>(k), 2.0)(rng);
    }

private:
    double df_;
    double decay_;
    double scale_;
};

}  // namespace

std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (batch + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

McEstimate mc_european(const ModelSpec& m, const CirParams& p, const OptionSpec& o, double t, double state,
                       std::size_t n, std::uint64_t seed) {
    check_n(n);
    o.validate();
    const double sign = o.kind == OptionKind::Call ? 1.0 : -1.0;
    const double tau = o.maturity - t;
    if (tau <= 0.0) return exact(std::max(sign * (m.vix_of_state(state) - o.strike), 0.0), n, seed);
    const auto law = transition_law(p, tau, m.factor_of_state(state));
    const double disc = std::exp(-o.rate * tau);
    const PowerSum& f = m.map();
    return run(n, seed, [&](std::mt19937_64& rng) {
        return disc * std::max(sign * (f(law.draw(rng)) - o.strike), 0.0);
    });
}

McEstimate mc_futures(const ModelSpec& m, const CirParams& p, double T, double state, std::size_t n,
                      std::uint64_t seed) {
    check_n(n);
    if (T <= 0.0) return exact(m.vix_of_state(state), n, seed);
    const auto law = transition_law(p, T, m.factor_of_state(state));
    const PowerSum& f = m.map();
    return run(n, seed, [&](std::mt19937_64& rng) { return f(law.draw(rng)); });
}

McEstimate mc_futures_stepped(const ModelSpec& m, const CirParams& p, double T, double state, std::size_t n,
                              int steps, std::uint64_t seed) {
    check_n(n);
    if (steps < 1) throw std::invalid_argument("steps must be positive");
    if (T <= 0.0) return exact(m.vix_of_state(state), n, seed);
    const Stepper step(p, T / steps);
    const double y0 = m.factor_of_state(state);
    const PowerSum& f = m.map();
    return run(n, seed, [&](std::mt19937_64& rng) {
        double y = y0;
        for (int k = 0; k < steps; ++k) y = step(y, rng);
        return f(y);
    });
}

McEstimate mc_eep_kernel(const PricingProblem& prob, double u, double state, double z_lower, double z_upper,
                         std::size_t n, std::uint64_t seed) {
    check_n(n);
    if (!(u > 0.0)) throw std::invalid_argument("mc_eep_kernel requires u > 0");
    const auto law = transition_law(prob.cir(), u, prob.model().factor_of_state(state));
    const auto regions = prob.exercise_factor_region(z_lower, z_upper);
    const double disc = std::exp(-prob.option().rate * u);
    const PowerSum& h = prob.waiting_factor();
    return run(n, seed, [&](std::mt19937_64& rng) {
        const double y = law.draw(rng);
        for (const auto& r : regions) {
            if (y >= r.lo && y <= r.hi) return -disc * h(y);
        }
        return 0.0;
    });
}

namespace {

McEstimate policy_run(const PricingProblem& prob, const Boundary& bdry, double t, double state, std::size_t n,
                      int steps, std::uint64_t seed) {
    const double T = prob.option().maturity;
    const double dt = (T - t) / steps;
    const Stepper step(prob.cir(), dt);
    std::vector<double> lo(static_cast<std::size_t>(steps) + 1), hi(lo.size()), disc(lo.size());
    for (int k = 0; k <= steps; ++k) {
        const double s = t + k * dt;
        lo[static_cast<std::size_t>(k)] = bdry.has_lower ? bdry.lower_at(s) : 0.0;
        hi[static_cast<std::size_t>(k)] = bdry.has_upper ? bdry.upper_at(s) : kInf;
        disc[static_cast<std::size_t>(k)] = std::exp(-prob.option().rate * k * dt);
    }
    const ModelSpec& m = prob.model();
    const bool mixture = m.model_class() == ModelClass::Mixture;
    const double y0 = m.factor_of_state(state);
    return run(n, seed, [&](std::mt19937_64& rng) {
        double y = y0;
        for (int k = 1; k <= steps; ++k) {
            y = step(y, rng);
            const double s = mixture ? y : m.f(y);
            const auto kk = static_cast<std::size_t>(k);
            if (k == steps || s <= lo[kk] || s >= hi[kk]) return disc[kk] * prob.payoff(s);
        }
        return 0.0;
    });
}

}  // namespace

McAmericanReport mc_american_policy(const PricingProblem& prob, const Boundary& bdry, double t, double state,
                                    std::size_t n, int n_time_steps, std::uint64_t seed) {
    check_n(n);
    if (n_time_steps < 50) throw std::invalid_argument("n_time_steps must be at least 50");
    McAmericanReport rep;
    if (t >= prob.option().maturity || exercise_region_query(bdry, t, state) == Region::Exercise) {
        rep.estimate = exact(prob.payoff(state), n, seed);
        rep.coarse = rep.estimate;
        return rep;
    }
    rep.estimate = policy_run(prob, bdry, t, state, n, n_time_steps, seed);
    rep.coarse = policy_run(prob, bdry, t, state, n, n_time_steps / 2, seed);
    rep.bias_indicator = std::abs(rep.estimate.mean - rep.coarse.mean);
    return rep;
}

}  // namespace vixopt
