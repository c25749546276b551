#pragma once

#include <span>

#include "vixopt/cir.hpp"
#include "vixopt/power_sum.hpp"

namespace vixopt {

// adaptive: Gauss-Kronrod subdivision of g(y) q(y) between the tail_mass_cut quantile bounds.
// series:   exact Poisson / incomplete-gamma partial moments, term by term.
enum class QuadratureMethod { Adaptive, Series };

struct QuadratureConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 20;  // bisection depth of the adaptive scheme
    double tail_mass_cut = 1e-12;
    QuadratureMethod method = QuadratureMethod::Series;

    void validate() const;
};

// E[g(Y) ; Y in union of regions]. Throws DivergentIntegralError when some power of g
// is not integrable against the law at the origin, QuadratureError on non-convergence.
double expectation(const ChiSquareLaw& law, const PowerSum& g, std::span<const Interval> regions,
                   const QuadratureConfig& cfg = {});

}  // namespace vixopt
