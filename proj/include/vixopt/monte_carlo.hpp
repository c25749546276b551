#pragma once

#include <cstddef>
#include <cstdint>

#include "vixopt/american.hpp"

namespace vixopt {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

// Paths are generated in fixed batches, each with its own generator seeded from
// (seed, batch index); results are reduced in batch order, so estimates are
// bit-identical for a given seed.
inline constexpr std::size_t kMcBatch = 16384;

std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch);

McEstimate mc_european(const ModelSpec& m, const CirParams& p, const OptionSpec& o, double t, double state,
                       std::size_t n, std::uint64_t seed);

McEstimate mc_futures(const ModelSpec& m, const CirParams& p, double T, double state, std::size_t n,
                      std::uint64_t seed);

// Same futures estimate, simulating the factor through `steps` exact transitions.
McEstimate mc_futures_stepped(const ModelSpec& m, const CirParams& p, double T, double state, std::size_t n,
                              int steps, std::uint64_t seed);

// -E[e^{-ru} H(X_u) ; X_u in exercise set], the quantity eep_kernel computes.
McEstimate mc_eep_kernel(const PricingProblem& prob, double u, double state, double z_lower, double z_upper,
                         std::size_t n, std::uint64_t seed);

struct McAmericanReport {
    McEstimate estimate;       // n_time_steps stopping dates
    McEstimate coarse;         // n_time_steps / 2 stopping dates, same seed
    double bias_indicator = 0.0;  // |estimate - coarse|
};

// Discounted payoff of the rule "stop at the first simulated date in the exercise set",
// with exact factor transitions between dates.
McAmericanReport mc_american_policy(const PricingProblem& prob, const Boundary& bdry, double t, double state,
                                    std::size_t n, int n_time_steps, std::uint64_t seed);

}  // namespace vixopt
