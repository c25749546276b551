#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "vixopt/american.hpp"

namespace vixopt {

// A bundled or user run configuration. "state" is the VIX level for A1/A2 models and the
// factor level for the mixture; "vix0" gives a VIX level to invert through either branch.
struct RunConfig {
    std::string name;
    ModelSpec model;
    CirParams cir;
    OptionSpec contract;
    SolverConfig solver;
    QuadratureConfig quadrature;
    std::optional<double> state;
    std::optional<double> vix0;
    std::string output_path;
    std::string output_format = "csv";
};

// Throws ConfigError for schema problems and ModelError for invalid parameters.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

ModelSpec parse_model(const nlohmann::json& doc);

}  // namespace vixopt
