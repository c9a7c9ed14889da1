#pragma once

#include "kstab/monte_carlo.hpp"
#include "kstab/polynomial.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace kstab {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Polynomial in chart variables compiled to double-precision terms.
class CompiledPolynomial {
public:
    explicit CompiledPolynomial(const Polynomial& p);

    cdouble value(const cdouble* u) const;
    /// out[j] = d/du_j.
    void gradient(const cdouble* u, cdouble* out) const;

private:
    std::size_t nvars_;
    std::vector<double> coeffs_;
    std::vector<std::vector<int>> exps_;
};

/// Map from C^d into homogeneous coordinates of P^m, one polynomial per coordinate.
class Parametrization {
public:
    Parametrization(std::vector<Polynomial> components, std::size_t chart_dim, int multiplicity = 1);

    static Parametrization parse(const std::vector<std::string>& components,
                                 const std::vector<std::string>& chart_variables, int multiplicity = 1);

    std::size_t chart_dim() const { return chart_dim_; }
    std::size_t ambient() const { return compiled_.size(); }
    int multiplicity() const { return multiplicity_; }
    const std::vector<Polynomial>& components() const { return components_; }

    /// z = F(u) and jac(i, j) = dF_i/du_j.
    void evaluate(const cdouble* u, CVector& z, CMatrix& jac) const;
    CVector point(const std::vector<cdouble>& u) const;

private:
    std::vector<Polynomial> components_;
    std::vector<CompiledPolynomial> compiled_;
    std::size_t chart_dim_;
    int multiplicity_;
};

/// Components with multiplicities (a cycle), or a single generic fiber.
using Cycle = std::vector<Parametrization>;

/// "u" for one chart variable; u, v, w for two or three; u1..ud beyond.
std::vector<std::string> default_chart_variables(std::size_t d);

/// Pullback density of the Fubini-Study form (a line has mass 1) for a map with
/// value z and Jacobian jac at a point: d!/pi^d det(ddbar log |z|^2).
/// Throws NumericError when z = 0.
double fs_density(const CVector& z, const CMatrix& jac);
double fs_volume_density(const Parametrization& p, const std::vector<cdouble>& u);

/// Sections s_a = sum_b M(a, b) * monomial_b of degree k, with an optional
/// diagonal flow exp(t * lambda_a) applied on top.
struct SectionBasis {
    int k = 0;
    std::vector<Monomial> monomials;
    CMatrix M;
};

/// Values and chart derivatives of the sections composed with a parametrization.
/// Z and dZ are jointly rescaled by a positive scalar, which leaves every
/// projective quantity unchanged.
void evaluate_sections(const SectionBasis& basis, const Parametrization& p, const cdouble* u, CVector& Z,
                       CMatrix& dZ);

/// The monomials of `basis` evaluated at ambient point z, scaled by |z|^{-k}.
CVector normalized_monomials(const std::vector<Monomial>& monomials, const CVector& z);

/// Integral of f(z) against the Fubini-Study volume over the cycle.
MCEstimate mc_integrate(const Cycle& cycle, const std::function<double(const CVector&)>& f,
                        const MCOptions& options);

struct HermitianEstimate {
    CMatrix value;
    Eigen::MatrixXd std_error;
    std::size_t samples = 0;
    bool consistent = true;
    /// max |H - H^*| before symmetrization, relative to max |H|.
    double symmetry_residual = 0.0;
};

/// H(a, b) = integral of m_a conj(m_b) / |z|^{2k} over the cycle.
/// Throws NumericError when H is singular (a basis element vanishes on the cycle).
HermitianEstimate gram_matrix(const Cycle& cycle, int k, const std::vector<Monomial>& basis,
                              const MCOptions& options);

/// M(a, b) = integral over the image Z_k of Z_a conj(Z_b) / |Z|^2.
HermitianEstimate moment_matrix(const Cycle& cycle, const SectionBasis& sections, const MCOptions& options);

/// (n+1) Tr((B + B^*) M).
double energy_derivative(const CMatrix& M, const CMatrix& B, int n);

/// (n+1) times the integral over exp(t diag(lambda)) Z_k of z^*(2 diag(lambda))z / z^*z.
MCEstimate energy_derivative_at_t(const Cycle& cycle, const SectionBasis& sections,
                                  const std::vector<double>& lambda, double t, int n, const MCOptions& options);

struct N2Estimate {
    double value = 0.0;
    double std_error = 0.0;
    double mean = 0.0;    // the normalizing constant subtracted from h
    double volume = 0.0;
    bool consistent = true;
};

/// Variance of h(z) = sum lambda_a |z_a|^2 / |z|^2 over the cycle, multiplicity weighted.
N2Estimate n2_integral(const Cycle& cycle, const std::vector<double>& lambda, const MCOptions& options);

struct GSResult {
    std::vector<long> block_weights;
    std::vector<std::size_t> block_sizes;
    CMatrix M;
};

/// Lower-triangular M with M G M^* = I for vectors ordered by ascending weight;
/// positive real diagonal. Throws NumericError if G is not positive definite.
GSResult equivariant_gram_schmidt(const std::vector<long>& weights, const CMatrix& G);

/// rho_k(z) = sum_a |s_a(z)|^2 / |z|^{2k}.
double bergman_density(const SectionBasis& sections, const CVector& z);

}  // namespace kstab
