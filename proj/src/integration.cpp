#include "vixopt/integration.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vixopt/errors.hpp"

namespace vixopt {

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("quadrature rel_tol must lie in (0,1)");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature abs_tol must be positive");
    if (max_subdivisions < 1) throw std::invalid_argument("quadrature max_subdivisions must be positive");
    if (!(tail_mass_cut > 0.0 && tail_mass_cut < 0.5)) {
        throw std::invalid_argument("quadrature tail_mass_cut must lie in (0, 0.5)");
    }
}

namespace {

void check_integrable(const ChiSquareLaw& law, const PowerSum& g, std::span<const Interval> regions) {
    bool touches_origin = false;
    for (const auto& r : regions) touches_origin = touches_origin || (r.lo <= 0.0 && r.hi > 0.0);
    if (!touches_origin || g.empty()) return;
    const double s = g.min_exponent();
    if (!(0.5 * law.df() + s > 0.0)) {
        throw DivergentIntegralError("integrand ~ y^" + std::to_string(s) +
                                     " is not integrable at 0 against a density ~ y^" +
                                     std::to_string(0.5 * law.df() - 1.0));
    }
}

double adaptive(const ChiSquareLaw& law, const PowerSum& g, std::span<const Interval> regions,
                const QuadratureConfig& cfg) {
    using boost::math::quadrature::gauss_kronrod;
    const Interval cut = law.tail_bounds(cfg.tail_mass_cut);
    auto integrand = [&](double y) { return y > 0.0 ? g(y) * law.density(y) : 0.0; };
    const double mid = law.mean();
    double total = 0.0;
    for (const auto& r : regions) {
        const double a = std::max(r.lo, cut.lo);
        const double b = std::min(r.hi, cut.hi);
        if (!(b > a)) continue;
        double pieces[3] = {a, b, b};
        int n = 1;
        if (mid > a && mid < b) {
            pieces[1] = mid;
            pieces[2] = b;
            n = 2;
        }
        for (int k = 0; k < n; ++k) {
            double err = 0.0;
            double l1 = 0.0;
            const double v = gauss_kronrod<double, 31>::integrate(integrand, pieces[k], pieces[k + 1],
                                                                  static_cast<unsigned>(cfg.max_subdivisions),
                                                                  cfg.rel_tol, &err, &l1);
            if (!std::isfinite(v) || err > 10.0 * std::max(cfg.abs_tol, cfg.rel_tol * l1)) {
                throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(pieces[k]) +
                                      ", " + std::to_string(pieces[k + 1]) + "]: error estimate " +
                                      std::to_string(err));
            }
            total += v;
        }
    }
    return total;
}

}  // namespace

double expectation(const ChiSquareLaw& law, const PowerSum& g, std::span<const Interval> regions,
                   const QuadratureConfig& cfg) {
    check_integrable(law, g, regions);
    if (cfg.method == QuadratureMethod::Series) return law.expectation(g, regions);
    return adaptive(law, g, regions, cfg);
}

}  // namespace vixopt
