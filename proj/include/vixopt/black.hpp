#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vixopt/integration.hpp"
#include "vixopt/models.hpp"

namespace vixopt {

// Price outside the open no-arbitrage band of the Black call.
class InversionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

double normal_cdf(double x);

// Black (1976) call on a futures price F.
double black_call(double F, double K, double T, double r, double sigma);
double black_vega(double F, double K, double T, double r, double sigma);

// Safeguarded Newton on [1e-6, 10] with bisection fallback.
double implied_vol(double price, double F, double K, double T, double r);

struct SkewPoint {
    double moneyness = 0.0;  // log(K / F_T)
    double implied_vol = 0.0;
    double strike = 0.0;
    double price = 0.0;
    bool ok = false;
    std::string error;
};

// Model call prices across log-moneyness, inverted through the Black formula.
// Failed points carry ok = false and an error message.
std::vector<SkewPoint> skew_curve(const ModelSpec& m, const CirParams& p, double T, double r, double state,
                                  std::span<const double> moneyness, const QuadratureConfig& q = {});

// Least-squares slope of implied vol against moneyness over the successful points.
double skew_slope(std::span<const SkewPoint> curve);

}  // namespace vixopt
