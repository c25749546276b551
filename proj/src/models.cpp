#include "vixopt/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vixopt/errors.hpp"
#include "vixopt/roots.hpp"

namespace vixopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRootTol = 1e-15;
constexpr int kGridPoints = 1000;

PowerSum build_map(const std::vector<ModelTerm>& dec, const std::vector<ModelTerm>& inc) {
    std::vector<PowerTerm> t;
    for (const auto& d : dec) t.push_back({d.weight, -d.power});
    for (const auto& i : inc) t.push_back({i.weight, i.power});
    return PowerSum(std::move(t));
}

void check_terms(const std::vector<ModelTerm>& terms, bool decreasing) {
    for (const auto& t : terms) {
        if (!(t.weight > 0.0) || !std::isfinite(t.weight)) throw ModelError("model weights must be positive");
        if (decreasing && !(t.power > 0.0 && std::isfinite(t.power))) {
            throw ModelError("decreasing (A1) powers must be positive");
        }
        if (!decreasing && !(t.power > 0.0 && t.power <= 1.0)) {
            throw ModelError("increasing (A2) powers must lie in (0, 1]");
        }
    }
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    return x;
}

struct SignChange {
    double lo;
    double hi;
    bool rising;
};

std::vector<SignChange> sign_changes(const std::vector<double>& grid, const ScalarFn& fn, int& first_sign,
                                     int& last_sign) {
    std::vector<SignChange> out;
    first_sign = 0;
    int prev_sign = 0;
    double prev_x = 0.0;
    for (double x : grid) {
        const double v = fn(x);
        const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (s == 0) continue;
        if (first_sign == 0) first_sign = s;
        if (prev_sign != 0 && s != prev_sign) out.push_back({prev_x, x, s > 0});
        prev_sign = s;
        prev_x = x;
    }
    last_sign = prev_sign;
    return out;
}

std::vector<Interval> normalize_intervals(std::vector<Interval> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](const Interval& i) { return !(i.hi > i.lo); }), v.end());
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& i : v) {
        if (!out.empty() && i.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, i.hi);
        } else {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
    std::vector<Interval> out;
    for (const auto& x : a) {
        for (const auto& y : b) {
            const double lo = std::max(x.lo, y.lo);
            const double hi = std::min(x.hi, y.hi);
            if (hi > lo) out.push_back({lo, hi});
        }
    }
    return normalize_intervals(std::move(out));
}

}  // namespace

const char* to_string(ModelClass c) {
    switch (c) {
        case ModelClass::A1:
            return "A1";
        case ModelClass::A2:
            return "A2";
        case ModelClass::Mixture:
            return "mixture";
    }
    return "?";
}

const char* to_string(OptionKind k) { return k == OptionKind::Call ? "call" : "put"; }

ModelSpec::ModelSpec(ModelClass c, std::vector<ModelTerm> a1, std::vector<ModelTerm> a2)
    : class_(c), a1_(std::move(a1)), a2_(std::move(a2)) {
    check_terms(a1_, true);
    check_terms(a2_, false);
    f_ = build_map(a1_, a2_);
    if (f_.empty()) throw ModelError("model needs at least one term");
    d1_ = f_.derivative(1);
    d2_ = f_.derivative(2);
    d3_ = f_.derivative(3);
    if (class_ == ModelClass::Mixture) {
        if (a2_.empty()) {
            y_min_ = kInf;
        } else if (a1_.empty()) {
            y_min_ = 0.0;
        } else {
            auto d1 = [this](double y) { return d1_(y); };
            auto d2 = [this](double y) { return d2_(y); };
            const auto br = expand_bracket(d1, 1.0);
            if (!br) throw ModelError("f' has no sign change: Assumption M fails");
            y_min_ = newton_bisect(d1, d2, br->lo, br->hi, kRootTol);
            check_single_turn();
        }
    }
}

ModelSpec ModelSpec::a1(std::vector<ModelTerm> terms) {
    if (terms.empty()) throw ModelError("A1 model needs at least one term");
    return {ModelClass::A1, std::move(terms), {}};
}

ModelSpec ModelSpec::a2(std::vector<ModelTerm> terms) {
    if (terms.empty()) throw ModelError("A2 model needs at least one term");
    return {ModelClass::A2, {}, std::move(terms)};
}

ModelSpec ModelSpec::mixture(std::vector<ModelTerm> decreasing, std::vector<ModelTerm> increasing) {
    return {ModelClass::Mixture, std::move(decreasing), std::move(increasing)};
}

void ModelSpec::check_single_turn() const {
    const auto grid = log_grid(std::min(1e-4, 1e-2 * y_min_), std::max(1e3, 1e2 * y_min_), kGridPoints);
    int first = 0, last = 0;
    const auto ch = sign_changes(grid, [this](double y) { return d1_(y); }, first, last);
    if (ch.size() != 1 || first != -1) {
        throw ModelError("Assumption M fails: f' changes sign " + std::to_string(ch.size()) + " times");
    }
}

double ModelSpec::f(double y) const {
    if (!(y > 0.0)) throw std::invalid_argument("f: factor level must be positive");
    return f_(y);
}
double ModelSpec::f_d1(double y) const {
    if (!(y > 0.0)) throw std::invalid_argument("f': factor level must be positive");
    return d1_(y);
}
double ModelSpec::f_d2(double y) const {
    if (!(y > 0.0)) throw std::invalid_argument("f'': factor level must be positive");
    return d2_(y);
}
double ModelSpec::f_d3(double y) const {
    if (!(y > 0.0)) throw std::invalid_argument("f''': factor level must be positive");
    return d3_(y);
}

double ModelSpec::g(double x) const {
    if (class_ == ModelClass::Mixture) throw ModelError("g: the mixture map has no global inverse");
    if (!(x > 0.0)) throw std::invalid_argument("g: VIX level must be positive");
    if (std::isinf(x)) return class_ == ModelClass::A1 ? 0.0 : kInf;
    if (a1_.size() == 1) return std::pow(a1_[0].weight / x, 1.0 / a1_[0].power);
    if (a2_.size() == 1) return std::pow(x / a2_[0].weight, 1.0 / a2_[0].power);
    const double lx = std::log(x);
    auto fn = [&](double y) { return std::log(f_(y)) - lx; };
    auto dfn = [&](double y) { return d1_(y) / f_(y); };
    const auto br = expand_bracket(fn, 1.0);
    if (!br) throw ModelError("g: could not bracket the inverse");
    return newton_bisect(fn, dfn, br->lo, br->hi, kRootTol);
}

double ModelSpec::mixture_inverse(double x, Branch branch) const {
    if (class_ != ModelClass::Mixture) throw ModelError("mixture_inverse requires a mixture model");
    if (!(x > 0.0)) throw std::invalid_argument("mixture_inverse: VIX level must be positive");
    const bool lower = branch == Branch::Lower;
    if (lower && a1_.empty()) throw ModelError("mixture_inverse: no lower branch without a decreasing part");
    if (!lower && a2_.empty()) throw ModelError("mixture_inverse: no upper branch without an increasing part");
    if (std::isfinite(y_min_) && y_min_ > 0.0) {
        const double fmin = f_(y_min_);
        if (x < fmin) {
            throw ModelError("mixture_inverse: level " + std::to_string(x) + " is below min f = " +
                             std::to_string(fmin));
        }
        if (x == fmin) return y_min_;
    }
    const double lx = std::log(x);
    auto fn = [&](double y) { return std::log(f_(y)) - lx; };
    auto dfn = [&](double y) { return d1_(y) / f_(y); };
    double lo = 0.0, hi = 0.0;
    if (!std::isfinite(y_min_) || y_min_ == 0.0) {
        const auto br = expand_bracket(fn, 1.0);
        if (!br) throw ModelError("mixture_inverse: could not bracket");
        lo = br->lo;
        hi = br->hi;
    } else if (lower) {
        hi = y_min_;
        lo = 0.5 * y_min_;
        while (fn(lo) < 0.0) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-300) throw ModelError("mixture_inverse: lower branch not bracketed");
        }
    } else {
        lo = y_min_;
        hi = 2.0 * y_min_;
        while (fn(hi) < 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e300) throw ModelError("mixture_inverse: upper branch not bracketed");
        }
    }
    return newton_bisect(fn, dfn, lo, hi, kRootTol);
}

double ModelSpec::factor_of_state(double state) const {
    return class_ == ModelClass::Mixture ? state : g(state);
}

double ModelSpec::vix_of_state(double state) const {
    return class_ == ModelClass::Mixture ? f(state) : state;
}

void OptionSpec::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike)) throw ModelError("strike must be positive");
    if (!(maturity > 0.0) || !std::isfinite(maturity)) throw ModelError("maturity must be positive");
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw ModelError("rate must be non-negative");
}

void check_parameter_conditions(const ModelSpec& m, const CirParams& p) {
    const double k2 = p.kappa() * p.kappa();
    for (const auto& t : m.a1_terms()) {
        if (!(p.beta() > 0.5 * k2 * (t.power + 1.0))) {
            throw ModelError("parameter condition beta > kappa^2 (nu + 1) / 2 fails for nu = " +
                             std::to_string(t.power));
        }
    }
    for (const auto& t : m.a2_terms()) {
        if (!(p.beta() > 0.5 * k2 * (1.0 - t.power))) {
            throw ModelError("parameter condition beta > kappa^2 (1 - mu) / 2 fails for mu = " +
                             std::to_string(t.power));
        }
    }
}

PowerSum waiting_benefit(const ModelSpec& m, const CirParams& p, double r, double strike) {
    const PowerSum& f = m.map();
    const PowerSum f1 = f.derivative(1);
    const PowerSum f2 = f.derivative(2);
    return p.beta() * f1 + (-p.alpha()) * f1.shifted(1.0) + (0.5 * p.kappa() * p.kappa()) * f2.shifted(1.0) +
           (-r) * f + PowerSum::constant(r * strike);
}

double h_kernel(const ModelSpec& m, const CirParams& p, double r, double strike, double level) {
    if (!(level > 0.0)) throw std::invalid_argument("h_kernel: level must be positive");
    return waiting_benefit(m, p, r, strike)(m.factor_of_state(level));
}

double big_h_kernel(const ModelSpec& m, const CirParams& p, double r, double strike, double level,
                    OptionKind kind) {
    const double x = m.vix_of_state(level);
    const bool in_money = kind == OptionKind::Call ? x >= strike : x <= strike;
    if (!in_money) return 0.0;
    const double h = h_kernel(m, p, r, strike, level);
    return kind == OptionKind::Call ? h : -h;
}

CriticalLevels critical_levels(const ModelSpec& m, const CirParams& p, double r, double strike) {
    if (!(strike > 0.0)) throw ModelError("strike must be positive");
    CriticalLevels out;
    const PowerSum h = waiting_benefit(m, p, r, strike);
    int first = 0, last = 0;

    if (m.model_class() != ModelClass::Mixture) {
        auto hx = [&](double x) { return h(m.g(x)); };
        const auto ch = sign_changes(log_grid(1e-4, 1e3, kGridPoints), hx, first, last);
        out.sign_changes = static_cast<int>(ch.size());
        if (ch.size() != 1 || ch[0].rising) {
            throw ModelError("Assumption R fails: h changes sign " + std::to_string(ch.size()) +
                             " times on [1e-4, 1e3]");
        }
        out.x_star = bracketed_root(hx, ch[0].lo, ch[0].hi, kRootTol, 400);
        return out;
    }

    const bool dec = !m.a1_terms().empty();
    const bool inc = !m.a2_terms().empty();
    out.y_min = m.y_min();
    if (dec && inc && m.f(m.y_min()) >= strike) {
        throw ModelError("strike " + std::to_string(strike) + " does not exceed min f = " +
                         std::to_string(m.f(m.y_min())) + "; K_lower and K_upper are undefined");
    }
    out.k_lower = dec ? m.mixture_inverse(strike, Branch::Lower) : 0.0;
    out.k_upper = inc ? m.mixture_inverse(strike, Branch::Upper) : kInf;

    double lo = 1e-4, hi = 1e3;
    if (dec) lo = std::min(lo, 1e-4 * out.k_lower);
    if (inc) hi = std::max(hi, 1e3 * out.k_upper);
    const auto ch = sign_changes(log_grid(lo, hi, kGridPoints), [&](double y) { return h(y); }, first, last);
    out.sign_changes = static_cast<int>(ch.size());
    const std::size_t expected = (dec ? 1u : 0u) + (inc ? 1u : 0u);
    const bool pattern_ok = ch.size() == expected && (!dec || ch.front().rising) && (!inc || !ch.back().rising);
    if (!pattern_ok) {
        throw ModelError("Assumption R' fails: h changes sign " + std::to_string(ch.size()) + " times on [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    auto hy = [&](double y) { return h(y); };
    out.y_lower = dec ? bracketed_root(hy, ch.front().lo, ch.front().hi, kRootTol, 400) : 0.0;
    out.y_upper = inc ? bracketed_root(hy, ch.back().lo, ch.back().hi, kRootTol, 400) : kInf;
    return out;
}

PricingProblem::PricingProblem(ModelSpec model, CirParams cir, OptionSpec option)
    : model_(std::move(model)), cir_(cir), option_(option) {
    option_.validate();
    check_parameter_conditions(model_, cir_);
    const bool mixture = model_.model_class() == ModelClass::Mixture;
    if (mixture && option_.kind == OptionKind::Put) throw ModelError("puts are not supported under the mixture model");
    levels_ = critical_levels(model_, cir_, option_.rate, option_.strike);

    const double sign = option_.kind == OptionKind::Call ? 1.0 : -1.0;
    payoff_ = sign * (model_.map() - PowerSum::constant(option_.strike));
    h_ = sign * waiting_benefit(model_, cir_, option_.rate, option_.strike);

    const double K = option_.strike;
    if (mixture) {
        pay_lower_ = levels_.k_lower;
        pay_upper_ = levels_.k_upper;
        terminal_lower_ = std::min(levels_.k_lower, levels_.y_lower);
        terminal_upper_ = std::max(levels_.k_upper, levels_.y_upper);
        has_lower_ = !model_.a1_terms().empty();
        has_upper_ = !model_.a2_terms().empty();
    } else if (option_.kind == OptionKind::Call) {
        pay_lower_ = 0.0;
        pay_upper_ = K;
        terminal_lower_ = 0.0;
        terminal_upper_ = std::max(K, levels_.x_star);
        has_upper_ = true;
    } else {
        pay_lower_ = K;
        pay_upper_ = kInf;
        terminal_lower_ = std::min(K, levels_.x_star);
        terminal_upper_ = kInf;
        has_lower_ = true;
    }
}

double PricingProblem::payoff(double state) const {
    const double x = model_.vix_of_state(state);
    return std::max(option_.kind == OptionKind::Call ? x - option_.strike : option_.strike - x, 0.0);
}

double PricingProblem::payoff_slope(double state) const {
    if (model_.model_class() == ModelClass::Mixture) return model_.f_d1(state);
    return option_.kind == OptionKind::Call ? 1.0 : -1.0;
}

double PricingProblem::big_h(double state) const {
    const double y = model_.factor_of_state(state);
    return payoff_(y) >= 0.0 ? h_(y) : 0.0;
}

std::vector<Interval> PricingProblem::state_set_to_factor(double lower, double upper) const {
    std::vector<Interval> v;
    switch (model_.model_class()) {
        case ModelClass::Mixture:
            if (lower > 0.0) v.push_back({0.0, lower});
            if (upper < kInf) v.push_back({upper, kInf});
            break;
        case ModelClass::A1:
            if (upper < kInf) v.push_back({0.0, model_.g(upper)});
            if (lower > 0.0) v.push_back({model_.g(lower), kInf});
            break;
        case ModelClass::A2:
            if (lower > 0.0) v.push_back({0.0, model_.g(lower)});
            if (upper < kInf) v.push_back({model_.g(upper), kInf});
            break;
    }
    return normalize_intervals(std::move(v));
}

std::vector<Interval> PricingProblem::payoff_factor_region() const {
    return state_set_to_factor(pay_lower_, pay_upper_);
}

std::vector<Interval> PricingProblem::exercise_factor_region(double lower, double upper) const {
    return intersect(state_set_to_factor(lower, upper), payoff_factor_region());
}

}  // namespace vixopt
