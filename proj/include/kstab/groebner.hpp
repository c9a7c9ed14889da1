#pragma once

#include "kstab/polynomial.hpp"

#include <cstddef>
#include <vector>

namespace kstab {

/// Homogeneous ideal in Q[X_0..X_m]. Zero generators are dropped.
class Ideal {
public:
    /// Throws ValidationError naming the first inhomogeneous generator.
    Ideal(std::size_t nvars, std::vector<Polynomial> generators);

    std::size_t nvars() const { return nvars_; }
    const std::vector<Polynomial>& generators() const { return generators_; }

private:
    std::size_t nvars_;
    std::vector<Polynomial> generators_;
};

/// Reduced, monic Groebner basis, sorted by leading monomial.
struct GroebnerBasis {
    std::vector<Polynomial> elements;
    TermOrder order;

    std::vector<Monomial> leading_monomials() const;
    bool is_unit() const;
};

GroebnerBasis buchberger(const Ideal& ideal, const TermOrder& order);

/// Full reduction: no term of the result is divisible by a leading monomial of `basis`.
Polynomial normal_form(const Polynomial& f, const GroebnerBasis& basis);

/// Ideal of minimal-weight initial forms. `leading` holds the leading monomials of
/// the underlying basis, which also generate the initial ideal's own leading ideal.
struct InitialIdeal {
    std::vector<Polynomial> generators;
    WeightVector weight;
    std::vector<Monomial> leading;
    std::size_t nvars = 0;
};

InitialIdeal initial_ideal(const Ideal& ideal, const WeightVector& eta);
InitialIdeal initial_ideal(const GroebnerBasis& basis);

struct StandardMonomialBasis {
    int degree = 0;
    std::vector<Monomial> monomials;
};

/// All monomials of total degree k in nvars variables, lexicographically descending.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, int k);

StandardMonomialBasis standard_monomials(const InitialIdeal& init, int k);
StandardMonomialBasis standard_monomials(const std::vector<Monomial>& leading, std::size_t nvars, int k);

/// Krull dimension of S / (monomials). Brute force over coordinate subsets.
int krull_dimension(const std::vector<Monomial>& monomials, std::size_t nvars);

}  // namespace kstab
