#include "vixopt/european.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vixopt/errors.hpp"

namespace vixopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_state(double state) {
    if (!(state > 0.0) || !std::isfinite(state)) throw std::invalid_argument("state level must be positive");
}

}  // namespace

std::vector<Interval> payoff_factor_region(const ModelSpec& m, OptionKind kind, double strike) {
    if (!(strike > 0.0)) throw ModelError("strike must be positive");
    std::vector<Interval> above;  // where f >= strike
    std::vector<Interval> below;  // where f <= strike
    switch (m.model_class()) {
        case ModelClass::A1: {
            const double y = m.g(strike);
            above = {{0.0, y}};
            below = {{y, kInf}};
            break;
        }
        case ModelClass::A2: {
            const double y = m.g(strike);
            above = {{y, kInf}};
            below = {{0.0, y}};
            break;
        }
        case ModelClass::Mixture: {
            const bool dec = !m.a1_terms().empty();
            const bool inc = !m.a2_terms().empty();
            if (dec && inc && strike <= m.f(m.y_min())) {
                above = {{0.0, kInf}};
                break;
            }
            const double lo = dec ? m.mixture_inverse(strike, Branch::Lower) : 0.0;
            const double hi = inc ? m.mixture_inverse(strike, Branch::Upper) : kInf;
            if (lo > 0.0) above.push_back({0.0, lo});
            if (hi < kInf) above.push_back({hi, kInf});
            below = {{lo, hi}};
            break;
        }
    }
    return kind == OptionKind::Call ? above : below;
}

double european_price(const ModelSpec& m, const CirParams& p, const OptionSpec& o, double t, double state,
                      const QuadratureConfig& cfg) {
    check_state(state);
    o.validate();
    if (t > o.maturity) throw std::invalid_argument("valuation time exceeds maturity");
    const double tau = o.maturity - t;
    const double x = m.vix_of_state(state);
    const double sign = o.kind == OptionKind::Call ? 1.0 : -1.0;
    if (tau <= 0.0) return std::max(sign * (x - o.strike), 0.0);
    const auto law = transition_law(p, tau, m.factor_of_state(state));
    const auto regions = payoff_factor_region(m, o.kind, o.strike);
    const PowerSum payoff = sign * (m.map() - PowerSum::constant(o.strike));
    return std::exp(-o.rate * tau) * expectation(law, payoff, regions, cfg);
}

double european_price(const PricingProblem& prob, double t, double state, const QuadratureConfig& cfg) {
    check_state(state);
    const double T = prob.option().maturity;
    if (t > T) throw std::invalid_argument("valuation time exceeds maturity");
    const double tau = T - t;
    if (tau <= 0.0) return prob.payoff(state);
    const auto law = transition_law(prob.cir(), tau, prob.model().factor_of_state(state));
    const auto regions = prob.payoff_factor_region();
    return std::exp(-prob.option().rate * tau) * expectation(law, prob.payoff_factor(), regions, cfg);
}

double futures_price(const ModelSpec& m, const CirParams& p, double T, double state, const QuadratureConfig& cfg) {
    check_state(state);
    if (T < 0.0) throw std::invalid_argument("futures maturity must be non-negative");
    if (T == 0.0) return m.vix_of_state(state);
    const auto law = transition_law(p, T, m.factor_of_state(state));
    const Interval whole[] = {{0.0, kInf}};
    return expectation(law, m.map(), whole, cfg);
}

double futures_taylor(const ModelSpec& m, const CirParams& p, double T, double state) {
    check_state(state);
    if (!(T > 0.0)) throw std::invalid_argument("futures_taylor requires T > 0");
    const auto law = transition_law(p, T, m.factor_of_state(state));
    const double mu = law.mean();
    const PowerSum& f = m.map();
    double out = f(mu);
    double factorial = 1.0;
    for (int k = 2; k <= 4; ++k) {
        factorial *= k;
        out += law.central_moment(k) * f.derivative(k)(mu) / factorial;
    }
    return out;
}

double eep_kernel_factor(const PricingProblem& prob, double u, double y0, std::span<const Interval> regions,
                         const QuadratureConfig& cfg) {
    if (!(u > 0.0)) throw std::invalid_argument("eep_kernel_factor requires u > 0");
    if (regions.empty()) return 0.0;
    const auto law = transition_law(prob.cir(), u, y0);
    return -std::exp(-prob.option().rate * u) * expectation(law, prob.waiting_factor(), regions, cfg);
}

double eep_kernel(const PricingProblem& prob, double u, double state, double z_lower, double z_upper,
                  const QuadratureConfig& cfg) {
    check_state(state);
    if (u < 0.0) throw std::invalid_argument("eep_kernel requires u >= 0");
    if (u == 0.0) {
        const bool inside = state <= z_lower || state >= z_upper;
        return inside ? -prob.big_h(state) : 0.0;
    }
    const auto regions = prob.exercise_factor_region(z_lower, z_upper);
    return eep_kernel_factor(prob, u, prob.model().factor_of_state(state), regions, cfg);
}

double eep_kernel(const PricingProblem& prob, double u, double state, double z, const QuadratureConfig& cfg) {
    if (prob.has_lower() && prob.has_upper()) {
        throw std::invalid_argument("two-sided exercise set needs both boundary values");
    }
    if (prob.has_upper()) return eep_kernel(prob, u, state, 0.0, z, cfg);
    return eep_kernel(prob, u, state, z, kInf, cfg);
}

}  // namespace vixopt
