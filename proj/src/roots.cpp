#include "vixopt/roots.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace vixopt {

namespace {

bool opposite(double a, double b) { return (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0); }

}  // namespace

std::optional<Bracket> expand_bracket(const ScalarFn& f, double x0, double factor, int max_steps) {
    if (!(x0 > 0.0) || !(factor > 1.0)) throw std::invalid_argument("expand_bracket: need x0 > 0, factor > 1");
    const double f0 = f(x0);
    if (f0 == 0.0) return Bracket{x0, x0};
    double up = x0, fup = f0;
    double dn = x0, fdn = f0;
    bool up_ok = true, dn_ok = true;
    for (int k = 0; k < max_steps && (up_ok || dn_ok); ++k) {
        if (up_ok) {
            const double next = up * factor;
            if (!std::isfinite(next) || next > 1e300) {
                up_ok = false;
            } else {
                const double fn = f(next);
                if (!std::isfinite(fn)) {
                    up_ok = false;
                } else if (opposite(fup, fn)) {
                    return Bracket{up, next};
                } else {
                    up = next;
                    fup = fn;
                }
            }
        }
        if (dn_ok) {
            const double next = dn / factor;
            if (next < 1e-300) {
                dn_ok = false;
            } else {
                const double fn = f(next);
                if (!std::isfinite(fn)) {
                    dn_ok = false;
                } else if (opposite(fdn, fn)) {
                    return Bracket{next, dn};
                } else {
                    dn = next;
                    fdn = fn;
                }
            }
        }
    }
    return std::nullopt;
}

double newton_bisect(const ScalarFn& f, const ScalarFn& df, double lo, double hi, double rel_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!opposite(flo, fhi)) throw std::domain_error("newton_bisect: root is not bracketed");
    const bool increasing = flo < 0.0;
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < max_iter; ++i) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == increasing) {
            lo = x;
        } else {
            hi = x;
        }
        const double d = df(x);
        double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= rel_tol * std::abs(x) || hi - lo <= rel_tol * std::abs(x)) return x;
    }
    return x;
}

double bracketed_root(const ScalarFn& f, double lo, double hi, double rel_tol, int max_iter) {
    return bracketed_root(f, lo, hi, f(lo), f(hi), rel_tol, max_iter);
}

double bracketed_root(const ScalarFn& f, double lo, double hi, double flo, double fhi, double rel_tol,
                      int max_iter) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!opposite(flo, fhi)) throw std::domain_error("bracketed_root: root is not bracketed");
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    auto tol = [rel_tol](double a, double b) { return std::abs(b - a) <= rel_tol * std::min(std::abs(a), std::abs(b)); };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace vixopt
