#pragma once

#include "kstab/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kstab {

/// Exponent vector p = (p_0, ..., p_m) of a monomial X^p.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
    explicit Monomial(std::vector<int> exps);

    static Monomial variable(std::size_t nvars, std::size_t index);

    std::size_t size() const { return exps_.size(); }
    int operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<int>& exponents() const { return exps_; }
    int degree() const { return degree_; }

    bool divides(const Monomial& other) const;
    Monomial operator*(const Monomial& other) const;
    /// Quotient other / *this; requires divides(other).
    Monomial quotient_of(const Monomial& other) const;
    Monomial lcm(const Monomial& other) const;
    bool coprime(const Monomial& other) const;

    // Lexicographic on the exponent vector; storage order only, not a term order.
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }
    friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.exps_ <=> b.exps_; }

private:
    std::vector<int> exps_;
    int degree_ = 0;
};

/// Integer weights eta = (eta_0, ..., eta_m) of the diagonal C^* action.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::vector<long> eta) : eta_(std::move(eta)) {}

    std::size_t size() const { return eta_.size(); }
    long operator[](std::size_t i) const { return eta_[i]; }
    const std::vector<long>& values() const { return eta_; }
    long max_abs() const;
    WeightVector shifted(long c) const;

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<long> eta_;
};

/// p . eta. Throws std::invalid_argument on length mismatch.
long monomial_weight(const Monomial& p, const WeightVector& eta);

/// Weight-then-grevlex term order. A monomial that "precedes" compares less;
/// within a degree, smaller weight precedes, and grevlex-larger precedes among
/// equal weights. The leading term of a polynomial is its first term in this
/// order, so leading terms always carry the minimal weight.
class TermOrder {
public:
    TermOrder() = default;
    explicit TermOrder(WeightVector weight) : weight_(std::move(weight)) {}

    const WeightVector& weight() const { return weight_; }
    std::size_t size() const { return weight_.size(); }

    std::strong_ordering compare(const Monomial& p, const Monomial& q) const;
    bool precedes(const Monomial& p, const Monomial& q) const { return compare(p, q) < 0; }

private:
    WeightVector weight_;
};

std::strong_ordering compare_monomials(const TermOrder& order, const Monomial& p, const Monomial& q);

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational>;

    Polynomial() = default;
    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}
    Polynomial(std::size_t nvars, Terms terms);

    static Polynomial constant(std::size_t nvars, const Rational& c);
    static Polynomial monomial(const Monomial& m, const Rational& c = Rational(1));

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    Rational coefficient(const Monomial& m) const;

    bool is_homogeneous() const;
    /// Maximum total degree; -1 for the zero polynomial.
    int degree() const;
    /// Distinct total degrees of the terms, ascending.
    std::vector<int> degrees() const;

    /// First term under `order`. Requires a nonzero polynomial.
    std::pair<Monomial, Rational> leading_term(const TermOrder& order) const;
    /// Sum of the terms of minimal eta-weight.
    Polynomial min_weight_part(const WeightVector& eta) const;
    Polynomial monic(const TermOrder& order) const;

    /// Terms in `order` (leading first) as "c*x^a*y" pieces joined by +/-;
    /// coefficients as "p/q".
    std::string to_string(const std::vector<std::string>& variables, const TermOrder& order) const;
    /// Canonical printing under the plain grevlex order (zero weights).
    std::string to_string(const std::vector<std::string>& variables) const;

    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial operator-() const;
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Rational& c, const Polynomial& a);
    /// Multiplies by the term c * m.
    Polynomial times_term(const Monomial& m, const Rational& c) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

private:
    std::size_t nvars_ = 0;
    Terms terms_;
};

/// Parses the grammar
///   poly   := term (('+'|'-') term)*
///   term   := coeff ('*' factor)* | factor ('*' factor)*
///   factor := var ('^' uint)?
///   coeff  := int ('/' uint)?
/// with insignificant whitespace. A leading sign is allowed on the first term.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables);

}  // namespace kstab
