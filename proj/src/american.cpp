#include "vixopt/american.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "vixopt/errors.hpp"

namespace vixopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double interpolate(const std::vector<double>& times, const std::vector<double>& v, double t) {
    if (t <= times.front()) return v.front();
    if (t >= times.back()) return v.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times.begin());
    const double t0 = times[k - 1], t1 = times[k];
    const double a = v[k - 1], b = v[k];
    if (std::isinf(a) || std::isinf(b)) return a == b ? a : kInf;
    return a + (b - a) * (t - t0) / (t1 - t0);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Discretized integral equation at one grid time, as a function of the candidate boundary
// level x:  C^E(t,x) + premium(x) - G(x). Positive means continuation is worth more.
// Trapezoid rule: the first interval [0, dt] is integrated in s = sqrt(u) by Gauss-Legendre
// with the boundary interpolated linearly from x to the next grid value, the remaining
// intervals by the trapezoid rule on grid nodes (the same scheme american_price uses).
class StepResidual {
public:
    StepResidual(const PricingProblem& prob, const Boundary& b, std::size_t i, const SolverConfig& cfg,
                 const QuadratureConfig& q)
        : prob_(prob), q_(q), t_(b.times[i]), dt_(b.times[i + 1] - b.times[i]),
          trapezoid_(cfg.rule == TimeRule::Trapezoid), next_lower_(b.lower[i + 1]), next_upper_(b.upper[i + 1]),
          has_lower_(b.has_lower), has_upper_(b.has_upper) {
        const std::size_t n = b.times.size() - 1;
        for (std::size_t k = i + 1; k <= n; ++k) {
            double w = b.times[k] - b.times[k - 1];
            if (trapezoid_) {
                w = 0.0;
                if (k > i + 1) w += 0.5 * (b.times[k] - b.times[k - 1]);
                if (k < n) w += 0.5 * (b.times[k + 1] - b.times[k]);
            }
            u_.push_back(b.times[k] - t_);
            w_.push_back(w);
            regions_.push_back(prob.exercise_factor_region(b.lower[k], b.upper[k]));
        }
    }

    // Which side x stands for, and the value of the other side at this grid time.
    void solve_for(bool upper, double other) {
        upper_ = upper;
        other_ = other;
    }

    double operator()(double x) const {
        const double y0 = prob_.model().factor_of_state(x);
        double v = european_price(prob_, t_, x, q_) - prob_.payoff(x);
        if (trapezoid_) {
            const double lo_now = has_lower_ ? (upper_ ? other_ : x) : 0.0;
            const double up_now = has_upper_ ? (upper_ ? x : other_) : kInf;
            auto kernel = [&](double s) {
                const double u = s * s;
                const double th = u / dt_;
                const double lo = has_lower_ ? lo_now + (next_lower_ - lo_now) * th : 0.0;
                const double up = has_upper_ ? up_now + (next_upper_ - up_now) * th : kInf;
                const auto reg = prob_.exercise_factor_region(lo, up);
                return 2.0 * s * eep_kernel_factor(prob_, u, y0, reg, q_);
            };
            v += boost::math::quadrature::gauss<double, 8>::integrate(kernel, 0.0, std::sqrt(dt_));
        }
        for (std::size_t j = 0; j < u_.size(); ++j) {
            if (w_[j] != 0.0) v += w_[j] * eep_kernel_factor(prob_, u_[j], y0, regions_[j], q_);
        }
        return v;
    }

    [[nodiscard]] double time() const { return t_; }

private:
    const PricingProblem& prob_;
    QuadratureConfig q_;
    double t_;
    double dt_;
    bool trapezoid_;
    double next_lower_;
    double next_upper_;
    bool has_lower_;
    bool has_upper_;
    bool upper_ = true;
    double other_ = 0.0;
    std::vector<double> u_;
    std::vector<double> w_;
    std::vector<std::vector<Interval>> regions_;
};

double refine(const StepResidual& r, double a, double b, double fa, double fb, const SolverConfig& cfg) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (a > b) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    std::uintmax_t iters = static_cast<std::uintmax_t>(cfg.max_inner_iters);
    const double tol = cfg.inner_tol;
    auto stop = [tol](double lo, double hi) { return std::abs(hi - lo) <= tol; };
    const auto res = boost::math::tools::toms748_solve([&](double x) { return r(x); }, a, b, fa, fb, stop, iters);
    const double x = 0.5 * (res.first + res.second);
    if (res.second - res.first > tol) {
        throw SolverError("boundary iteration did not reach inner_tol at t = " + fmt(r.time()), r.time(), r(x));
    }
    return x;
}

// Upper side: continuation below the boundary, so R > 0 there; search upward from the
// later value `start`. Lower side mirrors this downward. `limit` is the terminal value,
// which bounds the boundary from the other side.
double solve_side(const StepResidual& r, double start, double limit, bool upper, const SolverConfig& cfg,
                  Boundary& out) {
    const double f0 = r(start);
    if (f0 <= 0.0) {
        double root = limit;
        const double fl = r(limit);
        if (fl > 0.0) root = refine(r, limit, start, fl, f0, cfg);
        const double clip = std::abs(start - root);
        out.max_clip = std::max(out.max_clip, clip);
        if (clip > 1e3 * cfg.inner_tol) {
            out.diagnostics.push_back("t=" + fmt(r.time()) + ": monotonicity clip of " + fmt(clip));
        }
        return start;
    }
    double a = start, fa = f0;
    double step = 0.01;
    for (int k = 0; k < 200; ++k) {
        const double b = upper ? a + start * step : a / (1.0 + step);
        const double fb = r(b);
        if (!std::isfinite(fb)) break;
        if (fb <= 0.0) return refine(r, a, b, fa, fb, cfg);
        a = b;
        fa = fb;
        step = std::min(2.0 * step, 1.0);
        if (a > 1e12 * start || a < 1e-12 * start) break;
    }
    throw SolverError("no sign change of the boundary equation found at t = " + fmt(r.time()), r.time(), fa);
}

}  // namespace

void SolverConfig::validate() const {
    if (n_steps < 2) throw std::invalid_argument("solver n_steps must be at least 2");
    if (!(inner_tol > 0.0)) throw std::invalid_argument("solver inner_tol must be positive");
    if (max_inner_iters < 1) throw std::invalid_argument("solver max_inner_iters must be positive");
}

double Boundary::lower_at(double t) const { return interpolate(times, lower, t); }
double Boundary::upper_at(double t) const { return interpolate(times, upper, t); }

void Boundary::write_csv(std::ostream& os) const {
    char buf[128];
    const bool two = has_lower && has_upper;
    os << (two ? "t,b_lower,b_upper\n" : "t,b\n");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (two) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", times[i], lower[i], upper[i]);
        } else {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", times[i], has_upper ? upper[i] : lower[i]);
        }
        os << buf;
    }
}

Boundary solve_boundary(const PricingProblem& prob, const SolverConfig& cfg, const QuadratureConfig& q) {
    cfg.validate();
    q.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.n_steps);
    const double T = prob.option().maturity;
    Boundary b;
    b.has_lower = prob.has_lower();
    b.has_upper = prob.has_upper();
    b.coordinate = prob.model().model_class() == ModelClass::Mixture ? "factor" : "vix";
    b.times.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) b.times[i] = T * static_cast<double>(i) / static_cast<double>(n);
    b.times[n] = T;
    b.lower.assign(n + 1, prob.terminal_lower());
    b.upper.assign(n + 1, prob.terminal_upper());

    for (std::size_t i = n; i-- > 0;) {
        StepResidual r(prob, b, i, cfg, q);
        if (b.has_upper) {
            r.solve_for(true, b.lower[i + 1]);
            b.upper[i] = solve_side(r, b.upper[i + 1], prob.terminal_upper(), true, cfg, b);
        }
        if (b.has_lower) {
            r.solve_for(false, b.upper[i]);
            b.lower[i] = solve_side(r, b.lower[i + 1], prob.terminal_lower(), false, cfg, b);
        }
        if (b.has_lower && b.has_upper && !(b.lower[i] < b.upper[i])) {
            throw SolverError("boundaries crossed at t = " + fmt(b.times[i]), b.times[i], b.lower[i] - b.upper[i]);
        }
    }
    return b;
}

Region exercise_region_query(const Boundary& bdry, double t, double state) {
    if (bdry.has_lower && state <= bdry.lower_at(t)) return Region::Exercise;
    if (bdry.has_upper && state >= bdry.upper_at(t)) return Region::Exercise;
    return Region::Continue;
}

double early_exercise_premium(const PricingProblem& prob, const Boundary& bdry, double t, double state,
                              const QuadratureConfig& q) {
    const double T = prob.option().maturity;
    if (!(t >= 0.0) || t > T) throw std::invalid_argument("valuation time must lie in [0, T]");
    if (!(state > 0.0)) throw std::invalid_argument("state level must be positive");
    if (t >= T || exercise_region_query(bdry, t, state) == Region::Exercise) return 0.0;

    const double y0 = prob.model().factor_of_state(state);
    const auto& times = bdry.times;
    const std::size_t n = times.size() - 1;
    std::size_t k0 = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
    if (k0 <= n && times[k0] - t < 1e-12 * std::max(1.0, T)) ++k0;
    if (k0 > n) k0 = n;

    auto kernel_at = [&](double u) {
        const double s = t + u;
        const auto reg = prob.exercise_factor_region(bdry.has_lower ? bdry.lower_at(s) : 0.0,
                                                     bdry.has_upper ? bdry.upper_at(s) : kInf);
        return eep_kernel_factor(prob, u, y0, reg, q);
    };

    // Near u = 0 the kernel behaves like a function of sqrt(u).
    const double first = times[k0] - t;
    double premium = 0.0;
    if (first > 0.0) {
        premium += boost::math::quadrature::gauss<double, 8>::integrate(
            [&](double s) { return 2.0 * s * kernel_at(s * s); }, 0.0, std::sqrt(first));
    }
    double prev = 0.0;
    for (std::size_t k = k0; k <= n; ++k) {
        const auto reg = prob.exercise_factor_region(bdry.lower[k], bdry.upper[k]);
        const double u = times[k] - t;
        const double cur = u > 0.0 ? eep_kernel_factor(prob, u, y0, reg, q) : 0.0;
        if (k > k0) premium += 0.5 * (prev + cur) * (times[k] - times[k - 1]);
        prev = cur;
    }
    return premium;
}

double american_price(const PricingProblem& prob, const Boundary& bdry, double t, double state,
                      const QuadratureConfig& q) {
    const double T = prob.option().maturity;
    if (t >= T) return prob.payoff(state);
    if (exercise_region_query(bdry, t, state) == Region::Exercise) return prob.payoff(state);
    return european_price(prob, t, state, q) + early_exercise_premium(prob, bdry, t, state, q);
}

double smooth_fit_check(const PricingProblem& prob, const Boundary& bdry, double t, Branch side,
                        const QuadratureConfig& q) {
    if (!(t < prob.option().maturity)) throw std::invalid_argument("smooth_fit_check requires t < T");
    const bool upper = side == Branch::Upper;
    if (upper ? !bdry.has_upper : !bdry.has_lower) throw std::invalid_argument("requested boundary side is absent");
    const double b = upper ? bdry.upper_at(t) : bdry.lower_at(t);
    const double h = 1e-3 * b;
    const double d = upper ? (prob.payoff(b) - american_price(prob, bdry, t, b - h, q)) / h
                           : (american_price(prob, bdry, t, b + h, q) - prob.payoff(b)) / h;
    return d - prob.payoff_slope(b);
}

double smooth_fit_check(const PricingProblem& prob, const Boundary& bdry, double t, const QuadratureConfig& q) {
    if (bdry.has_lower && bdry.has_upper) throw std::invalid_argument("two-sided boundary: choose a side");
    return smooth_fit_check(prob, bdry, t, bdry.has_upper ? Branch::Upper : Branch::Lower, q);
}

std::optional<ConvexityWitness> convexity_witness(std::span<const double> x, std::span<const double> v, double tol) {
    if (x.size() != v.size()) throw std::invalid_argument("convexity_witness: size mismatch");
    std::optional<ConvexityWitness> best;
    for (std::size_t i = 2; i < x.size(); ++i) {
        const double x1 = x[i - 2], x2 = x[i - 1], x3 = x[i];
        const double chord = v[i - 2] + (v[i] - v[i - 2]) * (x2 - x1) / (x3 - x1);
        const double excess = v[i - 1] - chord;
        if (excess > tol && (!best || excess > best->excess)) best = ConvexityWitness{x1, x2, x3, excess};
    }
    return best;
}

}  // namespace vixopt
