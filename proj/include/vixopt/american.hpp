#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vixopt/european.hpp"

namespace vixopt {

// Quadrature in elapsed time for the premium integral of each backward step.
//  trapezoid:      Gauss-Legendre in sqrt(u) on the first interval, where the kernel has a
//                  square-root layer, then the trapezoid rule on grid nodes;
//  right_endpoint: full weight on u = dt, 2 dt, ..., T - t.
enum class TimeRule { Trapezoid, RightEndpoint };

struct SolverConfig {
    int n_steps = 200;
    double inner_tol = 1e-9;  // absolute, in state units
    int max_inner_iters = 100;
    TimeRule rule = TimeRule::Trapezoid;

    void validate() const;
};

// Exercise set at time t is {state <= lower(t)} U {state >= upper(t)}, with lower = 0 or
// upper = +inf for a side that does not exist. State is the VIX level for A1/A2 models
// and the factor level for the mixture.
struct Boundary {
    std::vector<double> times;
    std::vector<double> lower;
    std::vector<double> upper;
    bool has_lower = false;
    bool has_upper = false;
    std::string coordinate;  // "vix" or "factor"
    double max_clip = 0.0;   // largest monotonicity correction applied while solving
    std::vector<std::string> diagnostics;

    [[nodiscard]] double lower_at(double t) const;
    [[nodiscard]] double upper_at(double t) const;
    void write_csv(std::ostream& os) const;
};

enum class Region { Continue, Exercise };

Boundary solve_boundary(const PricingProblem& prob, const SolverConfig& cfg = {}, const QuadratureConfig& q = {});

double american_price(const PricingProblem& prob, const Boundary& bdry, double t, double state,
                      const QuadratureConfig& q = {});

// Premium part of american_price alone (0 inside the exercise set).
double early_exercise_premium(const PricingProblem& prob, const Boundary& bdry, double t, double state,
                              const QuadratureConfig& q = {});

// One-sided difference quotient of the price from the continuation side of the chosen
// boundary (step 1e-3 b), minus the payoff slope there.
double smooth_fit_check(const PricingProblem& prob, const Boundary& bdry, double t, Branch side,
                        const QuadratureConfig& q = {});
// The side that exists (call: upper, put: lower); throws for two-sided boundaries.
double smooth_fit_check(const PricingProblem& prob, const Boundary& bdry, double t, const QuadratureConfig& q = {});

Region exercise_region_query(const Boundary& bdry, double t, double state);

struct ConvexityWitness {
    double x1, x2, x3;
    double excess;  // v(x2) minus the chord through (x1, v1), (x3, v3)
};

// Consecutive triple of a sampled function lying above its chord by more than tol
// (the one with the largest excess), if any. x must be increasing.
std::optional<ConvexityWitness> convexity_witness(std::span<const double> x, std::span<const double> v, double tol);

}  // namespace vixopt
