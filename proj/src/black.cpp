#include "vixopt/black.hpp"

#include <cmath>
#include <numbers>

#include "vixopt/european.hpp"

namespace vixopt {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double black_call(double F, double K, double T, double r, double sigma) {
    if (!(F > 0.0) || !(K > 0.0) || !(T > 0.0) || !(sigma > 0.0)) {
        throw std::invalid_argument("black_call requires F, K, T, sigma > 0");
    }
    const double sd = sigma * std::sqrt(T);
    const double d1 = (std::log(F / K) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    return std::exp(-r * T) * (F * normal_cdf(d1) - K * normal_cdf(d2));
}

double black_vega(double F, double K, double T, double r, double sigma) {
    const double sd = sigma * std::sqrt(T);
    const double d1 = (std::log(F / K) + 0.5 * sd * sd) / sd;
    return std::exp(-r * T) * F * std::sqrt(T) * std::exp(-0.5 * d1 * d1) / std::sqrt(2.0 * std::numbers::pi);
}

double implied_vol(double price, double F, double K, double T, double r) {
    if (!(F > 0.0) || !(K > 0.0) || !(T > 0.0)) throw std::invalid_argument("implied_vol requires F, K, T > 0");
    const double df = std::exp(-r * T);
    const double lower = df * std::max(F - K, 0.0);
    const double upper = df * F;
    if (!(price > lower) || !(price < upper)) {
        throw InversionError("price outside the no-arbitrage band (" + std::to_string(lower) + ", " +
                             std::to_string(upper) + ")");
    }
    double lo = 1e-6, hi = 10.0;
    if (price <= black_call(F, K, T, r, lo)) return lo;
    if (price >= black_call(F, K, T, r, hi)) throw InversionError("implied vol exceeds 10");
    double sigma = std::sqrt(2.0 * std::abs(std::log(F / K)) / T);
    if (!(sigma > lo && sigma < hi)) sigma = 0.5;
    for (int i = 0; i < 200; ++i) {
        const double diff = black_call(F, K, T, r, sigma) - price;
        if (std::abs(diff) <= 1e-14 * std::max(price, 1e-300)) return sigma;
        (diff > 0.0 ? hi : lo) = sigma;
        const double vega = black_vega(F, K, T, r, sigma);
        double next = vega > 0.0 ? sigma - diff / vega : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - sigma) <= 1e-15 * sigma) return next;
        sigma = next;
        if (hi - lo <= 1e-15 * sigma) break;
    }
    return sigma;
}

std::vector<SkewPoint> skew_curve(const ModelSpec& m, const CirParams& p, double T, double r, double state,
                                  std::span<const double> moneyness, const QuadratureConfig& q) {
    const double F = futures_price(m, p, T, state, q);
    std::vector<SkewPoint> out;
    out.reserve(moneyness.size());
    for (double k : moneyness) {
        SkewPoint pt;
        pt.moneyness = k;
        pt.strike = F * std::exp(k);
        try {
            OptionSpec o{pt.strike, T, r, OptionKind::Call};
            pt.price = european_price(m, p, o, 0.0, state, q);
            pt.implied_vol = implied_vol(pt.price, F, pt.strike, T, r);
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
        out.push_back(pt);
    }
    return out;
}

double skew_slope(std::span<const SkewPoint> curve) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : curve) {
        if (!p.ok) continue;
        n += 1;
        sx += p.moneyness;
        sy += p.implied_vol;
        sxx += p.moneyness * p.moneyness;
        sxy += p.moneyness * p.implied_vol;
    }
    const double den = n * sxx - sx * sx;
    if (n < 2 || den == 0.0) return std::nan("");
    return (n * sxy - sx * sy) / den;
}

}  // namespace vixopt
