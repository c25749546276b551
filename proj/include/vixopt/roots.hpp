#pragma once

#include <functional>
#include <optional>
#include <utility>

namespace vixopt {

using ScalarFn = std::function<double(double)>;

struct Bracket {
    double lo;
    double hi;
};

// Search (0, inf) for a sign change of f by geometric expansion about x0.
// Returns the tightest pair [x0 q^-k, x0 q^-(k-1)] or [x0 q^(k-1), x0 q^k] found.
std::optional<Bracket> expand_bracket(const ScalarFn& f, double x0 = 1.0, double factor = 2.0,
                                      int max_steps = 2000);

// Newton steps kept inside a shrinking bracket; bisects whenever Newton would leave it.
// f(lo) and f(hi) must have opposite signs.
double newton_bisect(const ScalarFn& f, const ScalarFn& df, double lo, double hi, double rel_tol = 1e-12,
                     int max_iter = 200);

// Derivative-free bracketed root (TOMS 748).
double bracketed_root(const ScalarFn& f, double lo, double hi, double rel_tol = 1e-12, int max_iter = 200);

// Same, but reuses known end values f(lo), f(hi).
double bracketed_root(const ScalarFn& f, double lo, double hi, double flo, double fhi, double rel_tol,
                      int max_iter);

}  // namespace vixopt
