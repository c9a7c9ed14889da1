#pragma once

#include "kstab/rational.hpp"

#include <string>
#include <vector>

namespace kstab {

/// Dense univariate polynomial c_0 + c_1 x + ... with rational coefficients.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    /// Coefficient of x^i; zero beyond the degree.
    Rational coefficient(int i) const;
    Rational leading() const;
    Rational operator()(const Rational& x) const;

    std::string to_string(const std::string& var = "k") const;

    friend bool operator==(const UniPoly&, const UniPoly&) = default;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// Unique polynomial of degree < values.size() through (x0 + i, values[i]).
UniPoly interpolate_consecutive(long x0, const std::vector<Rational>& values);

}  // namespace kstab
