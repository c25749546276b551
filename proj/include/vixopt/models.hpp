#pragma once

#include <limits>
#include <vector>

#include "vixopt/cir.hpp"
#include "vixopt/power_sum.hpp"

namespace vixopt {

enum class ModelClass { A1, A2, Mixture };
enum class OptionKind { Call, Put };
enum class Branch { Lower, Upper };

const char* to_string(ModelClass c);
const char* to_string(OptionKind k);

// One summand w * y^(-power) of a decreasing part, or w * y^power of an increasing part.
struct ModelTerm {
    double weight;
    double power;
};

// VIX = f(Y). A1: f = sum w_j y^-nu_j (decreasing, convex). A2: f = sum w_i y^mu_i with
// mu_i in (0,1] (increasing, concave). Mixture: both lists; either may be empty, which
// gives the reduced one-sided mixture still expressed in the factor coordinate.
class ModelSpec {
public:
    static ModelSpec a1(std::vector<ModelTerm> terms);
    static ModelSpec a2(std::vector<ModelTerm> terms);
    static ModelSpec mixture(std::vector<ModelTerm> decreasing, std::vector<ModelTerm> increasing);

    [[nodiscard]] ModelClass model_class() const { return class_; }
    [[nodiscard]] const std::vector<ModelTerm>& a1_terms() const { return a1_; }
    [[nodiscard]] const std::vector<ModelTerm>& a2_terms() const { return a2_; }
    [[nodiscard]] const PowerSum& map() const { return f_; }

    [[nodiscard]] double f(double y) const;
    [[nodiscard]] double f_d1(double y) const;
    [[nodiscard]] double f_d2(double y) const;
    [[nodiscard]] double f_d3(double y) const;

    // Global inverse, A1/A2 only.
    [[nodiscard]] double g(double x) const;

    // Mixture only: the preimage of x left or right of y_min.
    [[nodiscard]] double mixture_inverse(double x, Branch branch) const;

    // Minimiser of f (mixture). +inf when the increasing part is empty, 0 when the
    // decreasing part is empty.
    [[nodiscard]] double y_min() const { return y_min_; }

    // State coordinate: VIX level for A1/A2, factor level for the mixture.
    [[nodiscard]] double factor_of_state(double state) const;
    [[nodiscard]] double vix_of_state(double state) const;

private:
    ModelSpec(ModelClass c, std::vector<ModelTerm> a1, std::vector<ModelTerm> a2);
    void check_single_turn() const;

    ModelClass class_;
    std::vector<ModelTerm> a1_;
    std::vector<ModelTerm> a2_;
    PowerSum f_;
    PowerSum d1_;
    PowerSum d2_;
    PowerSum d3_;
    double y_min_ = std::numeric_limits<double>::quiet_NaN();
};

struct OptionSpec {
    double strike = 0.0;
    double maturity = 0.0;
    double rate = 0.0;
    OptionKind kind = OptionKind::Call;

    void validate() const;
};

// Example-specific conditions on (alpha, beta, kappa): beta > kappa^2 (nu + 1) / 2 for every
// decreasing power and beta > kappa^2 (1 - mu) / 2 for every increasing power.
void check_parameter_conditions(const ModelSpec& m, const CirParams& p);

// h in the factor coordinate as a power sum:
//   (beta - alpha y) f'(y) + kappa^2 y f''(y) / 2 - r f(y) + r K.
[[nodiscard]] PowerSum waiting_benefit(const ModelSpec& m, const CirParams& p, double r, double strike);

// h at a state level: VIX coordinate for A1/A2 (h(g(x))), factor coordinate for the mixture.
[[nodiscard]] double h_kernel(const ModelSpec& m, const CirParams& p, double r, double strike, double level);

// h times the indicator of the region where the payoff is positive.
[[nodiscard]] double big_h_kernel(const ModelSpec& m, const CirParams& p, double r, double strike, double level,
                                  OptionKind kind);

struct CriticalLevels {
    static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    double x_star = kNaN;   // A1/A2: h(x) >= 0 iff x <= x_star
    double k_lower = kNaN;  // mixture: f(k_lower) = K left of y_min
    double k_upper = kNaN;  // mixture: f(k_upper) = K right of y_min
    double y_lower = kNaN;  // mixture: h < 0 below, >= 0 above (within the left part)
    double y_upper = kNaN;  // mixture: h >= 0 below, < 0 above (within the right part)
    double y_min = kNaN;
    int sign_changes = 0;   // observed on the verification grid
};

// Thresholds plus the grid verification of the single-crossing assumption on
// a 1000-point log grid over [1e-4, 1e3]. Throws ModelError on violation.
[[nodiscard]] CriticalLevels critical_levels(const ModelSpec& m, const CirParams& p, double r, double strike);

// Model, factor dynamics and contract after every validity check.
class PricingProblem {
public:
    PricingProblem(ModelSpec model, CirParams cir, OptionSpec option);

    [[nodiscard]] const ModelSpec& model() const { return model_; }
    [[nodiscard]] const CirParams& cir() const { return cir_; }
    [[nodiscard]] const OptionSpec& option() const { return option_; }
    [[nodiscard]] const CriticalLevels& levels() const { return levels_; }

    // Payoff and waiting benefit as functions of the factor, valid on payoff_region().
    [[nodiscard]] const PowerSum& payoff_factor() const { return payoff_; }
    [[nodiscard]] const PowerSum& waiting_factor() const { return h_; }

    [[nodiscard]] double payoff(double state) const;
    [[nodiscard]] double payoff_slope(double state) const;
    [[nodiscard]] double big_h(double state) const;

    // Exercise sets are {state <= lower} U {state >= upper}; these map them to
    // disjoint factor intervals, intersected with the payoff region.
    [[nodiscard]] std::vector<Interval> exercise_factor_region(double lower, double upper) const;
    [[nodiscard]] std::vector<Interval> payoff_factor_region() const;

    // Terminal boundary pair in state coordinates.
    [[nodiscard]] double terminal_lower() const { return terminal_lower_; }
    [[nodiscard]] double terminal_upper() const { return terminal_upper_; }
    [[nodiscard]] bool has_lower() const { return has_lower_; }
    [[nodiscard]] bool has_upper() const { return has_upper_; }

private:
    [[nodiscard]] std::vector<Interval> state_set_to_factor(double lower, double upper) const;

    ModelSpec model_;
    CirParams cir_;
    OptionSpec option_;
    CriticalLevels levels_;
    PowerSum payoff_;
    PowerSum h_;
    double pay_lower_ = 0.0;
    double pay_upper_ = 0.0;
    double terminal_lower_ = 0.0;
    double terminal_upper_ = 0.0;
    bool has_lower_ = false;
    bool has_upper_ = false;
};

}  // namespace vixopt
