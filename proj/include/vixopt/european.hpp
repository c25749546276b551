#pragma once

#include <span>
#include <vector>

#include "vixopt/integration.hpp"
#include "vixopt/models.hpp"

namespace vixopt {

// Factor intervals where the payoff of the given kind and strike is non-negative.
std::vector<Interval> payoff_factor_region(const ModelSpec& m, OptionKind kind, double strike);

// European price without the assumptions needed for early exercise (any strike > 0).
double european_price(const ModelSpec& m, const CirParams& p, const OptionSpec& o, double t, double state,
                      const QuadratureConfig& cfg = {});

// e^{-r(T-t)} E[payoff(X_T) | state at t]. State is the VIX level (A1/A2) or factor (mixture).
double european_price(const PricingProblem& prob, double t, double state, const QuadratureConfig& cfg = {});

// E[f(Y_T) | state]; T = 0 returns the current VIX level.
double futures_price(const ModelSpec& m, const CirParams& p, double T, double state,
                     const QuadratureConfig& cfg = {});

// Fourth-order expansion of f about E[Y_T] using the central moments of the transition law.
double futures_taylor(const ModelSpec& m, const CirParams& p, double T, double state);

// Early-exercise premium density -E[e^{-ru} H(X_u) ; X_u in exercise set], where the
// exercise set is {state <= z_lower} U {state >= z_upper}. At u = 0 it is
// -H(state) times the indicator of the (closed) exercise set.
double eep_kernel(const PricingProblem& prob, double u, double state, double z_lower, double z_upper,
                  const QuadratureConfig& cfg = {});

// Single-boundary form: z is the call boundary (exercise at or above) or the put boundary
// (exercise at or below). Not available for a two-sided mixture.
double eep_kernel(const PricingProblem& prob, double u, double state, double z, const QuadratureConfig& cfg = {});

// Same density with the exercise set already mapped to factor intervals, from factor level y0.
double eep_kernel_factor(const PricingProblem& prob, double u, double y0, std::span<const Interval> regions,
                         const QuadratureConfig& cfg = {});

}  // namespace vixopt
