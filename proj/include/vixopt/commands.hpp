#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vixopt/models.hpp"

namespace vixopt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitVerification = 4;

struct CommandOptions {
    std::string config_path;
    std::string out;     // empty: write to the default stream
    std::string format;  // empty: take the config's output format
    std::uint64_t seed = 20240601;
    std::optional<Branch> branch;
    std::vector<double> t_grid;
    std::vector<double> state_grid;
    std::vector<double> moneyness_grid;
    std::optional<double> t;
    std::optional<double> state;
    std::string target = "european";
    std::size_t n = 200000;
    int mc_steps = 250;
};

// Runs futures | boundary | price | skew | mc-check. Results go to opts.out or `out`;
// failures are reported on `err` as a JSON object. Returns the process exit code.
int run_command(const std::string& command, const CommandOptions& opts, std::ostream& out, std::ostream& err);

std::vector<double> parse_grid(const std::string& text);

}  // namespace vixopt
