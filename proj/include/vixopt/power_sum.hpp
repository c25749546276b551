#pragma once

#include <span>
#include <vector>

namespace vixopt {

struct PowerTerm {
    double coef;
    double exponent;
};

// Finite sum  sum_i c_i * y^{p_i}  on y > 0. Every VIX map, payoff and
// waiting-benefit function in this library has this form, which lets the
// integration layer use either pointwise quadrature or exact moment series.
class PowerSum {
public:
    PowerSum() = default;
    explicit PowerSum(std::vector<PowerTerm> terms);

    static PowerSum constant(double c);

    [[nodiscard]] double operator()(double y) const;
    [[nodiscard]] PowerSum derivative(int order = 1) const;
    [[nodiscard]] std::span<const PowerTerm> terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    // Smallest exponent with a non-zero coefficient (0 for an empty sum).
    [[nodiscard]] double min_exponent() const;

    PowerSum& operator+=(const PowerSum& other);
    PowerSum& operator*=(double s);

    friend PowerSum operator+(PowerSum a, const PowerSum& b) { return a += b; }
    friend PowerSum operator-(PowerSum a, PowerSum b) { return a += (b *= -1.0); }
    friend PowerSum operator*(double s, PowerSum a) { return a *= s; }

    // Multiply by y^k.
    [[nodiscard]] PowerSum shifted(double k) const;

private:
    void normalize();
    std::vector<PowerTerm> terms_;
};

}  // namespace vixopt
