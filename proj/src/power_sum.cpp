#include "vixopt/power_sum.hpp"

#include <algorithm>
#include <cmath>

namespace vixopt {

PowerSum::PowerSum(std::vector<PowerTerm> terms) : terms_(std::move(terms)) { normalize(); }

PowerSum PowerSum::constant(double c) { return PowerSum({{c, 0.0}}); }

void PowerSum::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
    std::vector<PowerTerm> merged;
    for (const auto& t : terms_) {
        if (!merged.empty() && merged.back().exponent == t.exponent) {
            merged.back().coef += t.coef;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const PowerTerm& t) { return t.coef == 0.0; });
    terms_ = std::move(merged);
}

double PowerSum::operator()(double y) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        s += t.exponent == 0.0 ? t.coef : t.coef * std::pow(y, t.exponent);
    }
    return s;
}

PowerSum PowerSum::derivative(int order) const {
    std::vector<PowerTerm> out = terms_;
    for (int k = 0; k < order; ++k) {
        for (auto& t : out) {
            t.coef *= t.exponent;
            t.exponent -= 1.0;
        }
    }
    return PowerSum(std::move(out));
}

double PowerSum::min_exponent() const { return terms_.empty() ? 0.0 : terms_.front().exponent; }

PowerSum& PowerSum::operator+=(const PowerSum& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    normalize();
    return *this;
}

PowerSum& PowerSum::operator*=(double s) {
    for (auto& t : terms_) t.coef *= s;
    normalize();
    return *this;
}

PowerSum PowerSum::shifted(double k) const {
    std::vector<PowerTerm> out = terms_;
    for (auto& t : out) t.exponent += k;
    return PowerSum(std::move(out));
}

}  // namespace vixopt
