#pragma once

#include <stdexcept>
#include <string>

namespace vixopt {

// Parameter or contract outside the domain where the model is defined
// (Feller violation, failed assumption check, bad strike, ...).
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical integration did not reach its tolerance, or the integral diverges.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivergentIntegralError : public QuadratureError {
public:
    using QuadratureError::QuadratureError;
};

// Boundary solver could not satisfy the discretized integral equation.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double time, double residual)
        : std::runtime_error(what), time_(time), residual_(residual) {}
    [[nodiscard]] double time() const { return time_; }
    [[nodiscard]] double residual() const { return residual_; }

private:
    double time_;
    double residual_;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace vixopt
