#include "kstab/numeric.hpp"

#include "kstab/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace kstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double chart_constant(std::size_t d) {
    double f = 1.0;
    for (std::size_t i = 2; i <= d; ++i) {
        f *= static_cast<double>(i);
    }
    return f / std::pow(kPi, static_cast<double>(d));
}

cdouble ipow(cdouble base, int e) {
    cdouble r(1.0, 0.0);
    while (e > 0) {
        if (e & 1) {
            r *= base;
        }
        base *= base;
        e >>= 1;
    }
    return r;
}

std::vector<ComponentSpec> specs_of(const Cycle& cycle) {
    std::vector<ComponentSpec> out;
    for (const auto& p : cycle) {
        out.push_back({p.chart_dim(), p.multiplicity()});
    }
    return out;
}

HermitianEstimate assemble_hermitian(const MCVectorEstimate& est, Eigen::Index n) {
    HermitianEstimate h;
    h.value.resize(n, n);
    h.std_error.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const Eigen::Index idx = 2 * (a * n + b);
            h.value(a, b) = cdouble(est.value(idx), est.value(idx + 1));
            h.std_error(a, b) = std::hypot(est.std_error(idx), est.std_error(idx + 1));
        }
    }
    const double scale = h.value.cwiseAbs().maxCoeff();
    const CMatrix adj = h.value.adjoint();
    h.symmetry_residual = scale > 0 ? (h.value - adj).cwiseAbs().maxCoeff() / scale : 0.0;
    h.value = 0.5 * (h.value + adj);
    h.samples = est.samples;
    h.consistent = est.consistent;
    return h;
}

void outer_products(const CVector& v, double weight, double* out) {
    const Eigen::Index n = v.size();
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const cdouble p = v(a) * std::conj(v(b)) * weight;
            out[2 * (a * n + b)] = p.real();
            out[2 * (a * n + b) + 1] = p.imag();
        }
    }
}

}  // namespace

// ------------------------------------------------------------- polynomials

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) : nvars_(p.nvars()) {
    for (const auto& [m, c] : p.terms()) {
        coeffs_.push_back(c.to_double());
        exps_.push_back(m.exponents());
    }
}

cdouble CompiledPolynomial::value(const cdouble* u) const {
    cdouble total(0.0, 0.0);
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        cdouble term(coeffs_[t], 0.0);
        for (std::size_t j = 0; j < nvars_; ++j) {
            term *= ipow(u[j], exps_[t][j]);
        }
        total += term;
    }
    return total;
}

void CompiledPolynomial::gradient(const cdouble* u, cdouble* out) const {
    for (std::size_t j = 0; j < nvars_; ++j) {
        out[j] = 0.0;
    }
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        for (std::size_t j = 0; j < nvars_; ++j) {
            const int e = exps_[t][j];
            if (e == 0) {
                continue;
            }
            cdouble term(coeffs_[t] * e, 0.0);
            for (std::size_t l = 0; l < nvars_; ++l) {
                term *= ipow(u[l], l == j ? e - 1 : exps_[t][l]);
            }
            out[j] += term;
        }
    }
}

Parametrization::Parametrization(std::vector<Polynomial> components, std::size_t chart_dim, int multiplicity)
    : components_(std::move(components)), chart_dim_(chart_dim), multiplicity_(multiplicity) {
    if (components_.empty()) {
        throw ValidationError("parametrization has no components");
    }
    if (multiplicity_ < 1) {
        throw ValidationError("cycle multiplicity must be positive");
    }
    for (auto& c : components_) {
        if (c.nvars() != chart_dim_) {
            if (!c.is_zero()) {
                throw ValidationError("parametrization component has the wrong number of chart variables");
            }
            c = Polynomial(chart_dim_);
        }
        compiled_.emplace_back(c);
    }
}

Parametrization Parametrization::parse(const std::vector<std::string>& components,
                                       const std::vector<std::string>& chart_variables, int multiplicity) {
    std::vector<Polynomial> ps;
    for (const auto& c : components) {
        ps.push_back(parse_polynomial(c, chart_variables));
    }
    return Parametrization(std::move(ps), chart_variables.size(), multiplicity);
}

void Parametrization::evaluate(const cdouble* u, CVector& z, CMatrix& jac) const {
    const auto m = static_cast<Eigen::Index>(compiled_.size());
    const auto d = static_cast<Eigen::Index>(chart_dim_);
    z.resize(m);
    jac.resize(m, d);
    std::vector<cdouble> grad(chart_dim_);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& poly = compiled_[static_cast<std::size_t>(i)];
        z(i) = poly.value(u);
        poly.gradient(u, grad.data());
        for (Eigen::Index j = 0; j < d; ++j) {
            jac(i, j) = grad[static_cast<std::size_t>(j)];
        }
    }
}

CVector Parametrization::point(const std::vector<cdouble>& u) const {
    if (u.size() != chart_dim_) {
        throw std::invalid_argument("chart point has the wrong dimension");
    }
    CVector z;
    CMatrix jac;
    evaluate(u.data(), z, jac);
    return z;
}

std::vector<std::string> default_chart_variables(std::size_t d) {
    if (d == 1) {
        return {"u"};
    }
    if (d == 2) {
        return {"u", "v"};
    }
    if (d == 3) {
        return {"u", "v", "w"};
    }
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= d; ++i) {
        out.push_back("u" + std::to_string(i));
    }
    return out;
}

// --------------------------------------------------------------- densities

double fs_density(const CVector& z_in, const CMatrix& jac_in) {
    const double norm = z_in.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw NumericError("indeterminate point: all homogeneous coordinates vanish");
    }
    const CVector z = z_in / norm;
    const CMatrix jac = jac_in / norm;
    const Eigen::Index d = jac.cols();
    // g_ij = <J_i, J_j> - <J_i, z><z, J_j> with |z| = 1
    const CMatrix A = jac.transpose() * jac.conjugate();
    const CVector c = jac.transpose() * z.conjugate();
    const CMatrix g = A - c * c.adjoint();
    double det = 0.0;
    if (d == 1) {
        det = g(0, 0).real();
    } else {
        det = g.determinant().real();
    }
    return chart_constant(static_cast<std::size_t>(d)) * std::max(det, 0.0);
}

double fs_volume_density(const Parametrization& p, const std::vector<cdouble>& u) {
    if (u.size() != p.chart_dim()) {
        throw std::invalid_argument("chart point has the wrong dimension");
    }
    CVector z;
    CMatrix jac;
    p.evaluate(u.data(), z, jac);
    return fs_density(z, jac);
}

void evaluate_sections(const SectionBasis& basis, const Parametrization& p, const cdouble* u, CVector& Z,
                       CMatrix& dZ) {
    CVector F;
    CMatrix dF;
    p.evaluate(u, F, dF);
    const double s = F.cwiseAbs().maxCoeff();
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw NumericError("indeterminate point: all homogeneous coordinates vanish");
    }
    F /= s;
    dF /= s;
    const auto nb = static_cast<Eigen::Index>(basis.monomials.size());
    const Eigen::Index m = F.size();
    const Eigen::Index d = dF.cols();
    const int k = basis.k;
    // powers(i, e) = F_i^e
    CMatrix powers(m, k + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        powers(i, 0) = 1.0;
        for (int e = 1; e <= k; ++e) {
            powers(i, e) = powers(i, e - 1) * F(i);
        }
    }
    CVector mono(nb);
    CMatrix dmono = CMatrix::Zero(nb, d);
    for (Eigen::Index b = 0; b < nb; ++b) {
        const Monomial& mb = basis.monomials[static_cast<std::size_t>(b)];
        cdouble v(1.0, 0.0);
        for (Eigen::Index i = 0; i < m; ++i) {
            v *= powers(i, mb[static_cast<std::size_t>(i)]);
        }
        mono(b) = v;
        for (Eigen::Index i = 0; i < m; ++i) {
            const int e = mb[static_cast<std::size_t>(i)];
            if (e == 0) {
                continue;
            }
            cdouble rest(static_cast<double>(e), 0.0);
            for (Eigen::Index l = 0; l < m; ++l) {
                rest *= powers(l, l == i ? e - 1 : mb[static_cast<std::size_t>(l)]);
            }
            dmono.row(b) += rest * dF.row(i);
        }
    }
    Z = basis.M * mono;
    dZ = basis.M * dmono;
}

CVector normalized_monomials(const std::vector<Monomial>& monomials, const CVector& z) {
    const double norm = z.norm();
    if (!(norm > 0.0)) {
        throw NumericError("indeterminate point: all homogeneous coordinates vanish");
    }
    const CVector zn = z / norm;
    CVector out(static_cast<Eigen::Index>(monomials.size()));
    for (std::size_t a = 0; a < monomials.size(); ++a) {
        cdouble v(1.0, 0.0);
        for (Eigen::Index i = 0; i < zn.size(); ++i) {
            v *= ipow(zn(i), monomials[a][static_cast<std::size_t>(i)]);
        }
        out(static_cast<Eigen::Index>(a)) = v;
    }
    return out;
}

// ------------------------------------------------------------- integration

MCEstimate mc_integrate(const Cycle& cycle, const std::function<double(const CVector&)>& f,
                        const MCOptions& options) {
    auto integrand = [&](std::size_t c, const cdouble* u, double* out) {
        CVector z;
        CMatrix jac;
        cycle[c].evaluate(u, z, jac);
        out[0] = f(z) * fs_density(z, jac);
    };
    return mc_engine(specs_of(cycle), 1, integrand, options).component(0);
}

HermitianEstimate gram_matrix(const Cycle& cycle, int k, const std::vector<Monomial>& basis,
                              const MCOptions& options) {
    for (const auto& m : basis) {
        if (m.degree() != k) {
            throw std::invalid_argument("gram_matrix: basis monomial of the wrong degree");
        }
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    auto integrand = [&](std::size_t c, const cdouble* u, double* out) {
        CVector z;
        CMatrix jac;
        cycle[c].evaluate(u, z, jac);
        const double dens = fs_density(z, jac);
        outer_products(normalized_monomials(basis, z), dens, out);
    };
    HermitianEstimate h =
        assemble_hermitian(mc_engine(specs_of(cycle), static_cast<std::size_t>(2 * n * n), integrand, options), n);
    // Singularity is judged on the unit-diagonal rescaling, so widely different
    // monomial norms do not trip it.
    const Eigen::VectorXd diag = h.value.diagonal().real();
    if ((diag.array() <= 0.0).any()) {
        throw NumericError("basis dependent on cycle: a basis element has zero norm");
    }
    const Eigen::VectorXd inv = diag.cwiseSqrt().cwiseInverse();
    const CMatrix corr = inv.asDiagonal() * h.value * inv.asDiagonal();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(corr, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < 1e-10) {
        throw NumericError("basis dependent on cycle: Gram matrix is singular");
    }
    return h;
}

HermitianEstimate moment_matrix(const Cycle& cycle, const SectionBasis& sections, const MCOptions& options) {
    const auto n = sections.M.rows();
    auto integrand = [&](std::size_t c, const cdouble* u, double* out) {
        CVector Z;
        CMatrix dZ;
        evaluate_sections(sections, cycle[c], u, Z, dZ);
        const double dens = fs_density(Z, dZ);
        outer_products(Z / Z.norm(), dens, out);
    };
    return assemble_hermitian(mc_engine(specs_of(cycle), static_cast<std::size_t>(2 * n * n), integrand, options),
                              n);
}

double energy_derivative(const CMatrix& M, const CMatrix& B, int n) {
    if (M.rows() != B.rows() || M.cols() != B.cols() || M.rows() != M.cols()) {
        throw std::invalid_argument("energy_derivative: shape mismatch");
    }
    return static_cast<double>(n + 1) * ((B + B.adjoint()) * M).trace().real();
}

MCEstimate energy_derivative_at_t(const Cycle& cycle, const SectionBasis& sections,
                                  const std::vector<double>& lambda, double t, int n, const MCOptions& options) {
    if (static_cast<Eigen::Index>(lambda.size()) != sections.M.rows()) {
        throw std::invalid_argument("energy_derivative_at_t: generator size mismatch");
    }
    const double lmin = lambda.empty() ? 0.0 : *std::min_element(lambda.begin(), lambda.end());
    // Scalar rescaling of the flow keeps exponents non-positive for t <= 0.
    Eigen::VectorXd flow(static_cast<Eigen::Index>(lambda.size()));
    Eigen::VectorXd lam(static_cast<Eigen::Index>(lambda.size()));
    for (std::size_t a = 0; a < lambda.size(); ++a) {
        const double shift = t <= 0 ? lambda[a] - lmin : lambda[a];
        flow(static_cast<Eigen::Index>(a)) = std::exp(t * shift);
        lam(static_cast<Eigen::Index>(a)) = lambda[a];
    }
    auto integrand = [&](std::size_t c, const cdouble* u, double* out) {
        CVector Z;
        CMatrix dZ;
        evaluate_sections(sections, cycle[c], u, Z, dZ);
        Z = flow.asDiagonal() * Z;
        dZ = flow.asDiagonal() * dZ;
        const double dens = fs_density(Z, dZ);
        const double norm2 = Z.squaredNorm();
        const double h = (lam.array() * Z.cwiseAbs2().array()).sum() / norm2;
        out[0] = static_cast<double>(n + 1) * 2.0 * h * dens;
    };
    return mc_engine(specs_of(cycle), 1, integrand, options).component(0);
}

N2Estimate n2_integral(const Cycle& cycle, const std::vector<double>& lambda, const MCOptions& options) {
    auto hamiltonian = [&](const CVector& z) {
        if (static_cast<std::size_t>(z.size()) != lambda.size()) {
            throw std::invalid_argument("n2_integral: generator size mismatch");
        }
        double num = 0.0;
        for (Eigen::Index a = 0; a < z.size(); ++a) {
            num += lambda[static_cast<std::size_t>(a)] * std::norm(z(a));
        }
        return num / z.squaredNorm();
    };
    auto moments = [&](std::size_t c, const cdouble* u, double* out) {
        CVector z;
        CMatrix jac;
        cycle[c].evaluate(u, z, jac);
        const double dens = fs_density(z, jac);
        const double h = hamiltonian(z);
        out[0] = dens;
        out[1] = h * dens;
    };
    const MCVectorEstimate first = mc_engine(specs_of(cycle), 2, moments, options);
    N2Estimate out;
    out.volume = first.value(0);
    out.mean = first.value(1) / first.value(0);
    // Same samples again with the mean frozen: the value is the variance and the
    // standard error is the linearized one.
    const double mean = out.mean;
    const MCEstimate centred = mc_integrate(
        cycle,
        [&](const CVector& z) {
            const double dh = hamiltonian(z) - mean;
            return dh * dh;
        },
        options);
    out.value = centred.value;
    out.std_error = centred.std_error;
    out.consistent = centred.consistent && first.consistent;
    return out;
}

GSResult equivariant_gram_schmidt(const std::vector<long>& weights, const CMatrix& G) {
    const auto n = static_cast<Eigen::Index>(weights.size());
    if (G.rows() != n || G.cols() != n) {
        throw std::invalid_argument("equivariant_gram_schmidt: shape mismatch");
    }
    if (!std::is_sorted(weights.begin(), weights.end())) {
        throw std::invalid_argument("equivariant_gram_schmidt: weights must be grouped in ascending order");
    }
    GSResult out;
    for (long w : weights) {
        if (out.block_weights.empty() || out.block_weights.back() != w) {
            out.block_weights.push_back(w);
            out.block_sizes.push_back(0);
        }
        ++out.block_sizes.back();
    }
    if (n == 0) {
        out.M.resize(0, 0);
        return out;
    }
    const CMatrix H = 0.5 * (G + G.adjoint());
    Eigen::LLT<CMatrix> llt(H);
    if (llt.info() != Eigen::Success) {
        throw NumericError("Gram matrix is not positive definite");
    }
    const CMatrix L = llt.matrixL();
    const double scale = L.diagonal().cwiseAbs().maxCoeff();
    if (L.diagonal().real().minCoeff() <= 1e-10 * scale) {
        throw NumericError("Gram matrix is not positive definite within tolerance");
    }
    // M = L^{-1} is lower triangular, hence block lower triangular.
    out.M = L.triangularView<Eigen::Lower>().solve(CMatrix::Identity(n, n));
    out.M.triangularView<Eigen::StrictlyUpper>().setZero();
    return out;
}

double bergman_density(const SectionBasis& sections, const CVector& z) {
    const CVector mono = normalized_monomials(sections.monomials, z);
    return (sections.M * mono).squaredNorm();
}

}  // namespace kstab
