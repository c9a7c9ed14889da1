#include "doctest.h"

#include "kstab/errors.hpp"
#include "kstab/groebner.hpp"
#include "kstab/numeric.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace kstab;

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::vector<std::string> chart{"u"};

Cycle line_chart() { return {Parametrization::parse({"1", "u"}, chart)}; }
Cycle conic_chart() { return {Parametrization::parse({"1", "u", "u^2"}, chart)}; }
Cycle double_line_cycle() { return {Parametrization::parse({"1", "0", "u"}, chart, 2)}; }

MCOptions options(std::size_t samples, std::uint64_t seed = 7) {
    MCOptions o;
    o.samples = samples;
    o.seed = seed;
    return o;
}

SectionBasis orthonormal_sections(const Cycle& cycle, int k, std::vector<Monomial> monomials,
                                  const std::vector<long>& weights, const MCOptions& opt) {
    const HermitianEstimate G = gram_matrix(cycle, k, monomials, opt);
    return {k, std::move(monomials), equivariant_gram_schmidt(weights, G.value).M};
}

// P^1 monomials x^{k-j} y^j, weight j.
std::vector<Monomial> line_monomials(int k) {
    std::vector<Monomial> out;
    for (int j = 0; j <= k; ++j) {
        out.emplace_back(std::vector<int>{k - j, j});
    }
    return out;
}

std::vector<long> iota_weights(int k) {
    std::vector<long> w;
    for (int j = 0; j <= k; ++j) {
        w.push_back(j);
    }
    return w;
}

CMatrix random_pd(std::mt19937& rng, int n) {
    std::normal_distribution<double> g;
    CMatrix A(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            A(i, j) = cdouble(g(rng), g(rng));
        }
    }
    return A * A.adjoint() + 0.5 * CMatrix::Identity(n, n);
}

}  // namespace

TEST_CASE("Fubini-Study density of the line chart") {
    const Parametrization p = line_chart()[0];
    for (double r : {0.0, 0.3, 1.0, 7.5}) {
        const cdouble u(r * 0.6, r * 0.8);
        const double expect = (1.0 / kPi) / std::pow(1.0 + r * r, 2);
        CHECK(fs_volume_density(p, {u}) == doctest::Approx(expect).epsilon(1e-12));
    }
    const Parametrization constant = Parametrization::parse({"1", "2"}, chart);
    CHECK(fs_volume_density(constant, {cdouble(0.4, 0.1)}) == 0.0);
    const Parametrization vanishing = Parametrization::parse({"u", "u^2"}, chart);
    CHECK_THROWS_AS(fs_volume_density(vanishing, {cdouble(0.0, 0.0)}), NumericError);
    // radial oracle: total mass of the line density is 1
    const double mass = oracle::integrate_unit([](double v) {
        const double s = v / (1.0 - v);
        return (1.0 / kPi) / std::pow(1.0 + s, 2) * kPi / std::pow(1.0 - v, 2);
    });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Monte Carlo masses and symmetry") {
    const MCEstimate line = mc_integrate(line_chart(), [](const CVector&) { return 1.0; }, options(40000));
    CHECK(std::abs(line.value - 1.0) <= 3.0 * line.std_error);
    CHECK(line.consistent);
    const MCEstimate conic = mc_integrate(conic_chart(), [](const CVector&) { return 1.0; }, options(40000));
    CHECK(std::abs(conic.value - 2.0) <= 3.0 * conic.std_error);
    const MCEstimate anti = mc_integrate(
        line_chart(), [](const CVector& z) { return (z(0) * std::conj(z(1))).real() / z.squaredNorm(); },
        options(40000));
    CHECK(std::abs(anti.value) <= 3.0 * anti.std_error);
    MCOptions gauss = options(40000);
    gauss.law = SamplingLaw::gaussian();
    const MCEstimate g = mc_integrate(line_chart(), [](const CVector&) { return 1.0; }, gauss);
    CHECK(std::abs(g.value - 1.0) < 0.1);
    MCOptions mixture = options(40000);
    mixture.law = SamplingLaw::scale_mixture(6);
    const MCEstimate mix = mc_integrate(conic_chart(), [](const CVector&) { return 1.0; }, mixture);
    CHECK(std::abs(mix.value - 2.0) <= 3.0 * mix.std_error);
}

TEST_CASE("Monte Carlo results are bit-reproducible") {
    auto f = [](const CVector& z) { return std::norm(z(1)) / z.squaredNorm(); };
    const MCEstimate a = mc_integrate(conic_chart(), f, options(20000, 42));
    const MCEstimate b = mc_integrate(conic_chart(), f, options(20000, 42));
    MCOptions threaded = options(20000, 42);
    threaded.workers = 3;
    const MCEstimate c = mc_integrate(conic_chart(), f, threaded);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.value == c.value);
    const MCEstimate d = mc_integrate(conic_chart(), f, options(20000, 43));
    CHECK(a.value != d.value);
}

TEST_CASE("non-finite samples abort") {
    auto bad = [](const CVector& z) { return 1.0 / (z(1).real() - z(1).real()); };
    CHECK_THROWS_AS(mc_integrate(line_chart(), bad, options(10)), NumericError);
}

TEST_CASE("Gram matrices on the round line") {
    const HermitianEstimate g1 = gram_matrix(line_chart(), 1, line_monomials(1), options(40000));
    CHECK(std::abs(g1.value(0, 1)) <= 3.0 * g1.std_error(0, 1));
    CHECK(std::abs(g1.value(0, 0).real() - g1.value(1, 1).real()) <=
          3.0 * std::hypot(g1.std_error(0, 0), g1.std_error(1, 1)));
    CHECK(g1.symmetry_residual <= 1e-12);

    const HermitianEstimate g2 = gram_matrix(line_chart(), 2, line_monomials(2), options(100000));
    for (int j = 0; j <= 2; ++j) {
        const double quad = oracle::integrate_unit([j](double v) { return std::pow(v, j) * std::pow(1.0 - v, 2 - j); });
        const double beta = std::tgamma(j + 1.0) * std::tgamma(3.0 - j) / std::tgamma(4.0);
        CHECK(quad == doctest::Approx(beta).epsilon(1e-6));
        CHECK(std::abs(g2.value(j, j).real() - quad) <= 3.0 * g2.std_error(j, j));
        for (int l = 0; l <= 2; ++l) {
            if (l != j) {
                CHECK(std::abs(g2.value(j, l)) <= 3.0 * g2.std_error(j, l));
            }
        }
    }
}

TEST_CASE("dependent bases are flagged") {
    // x*z and y^2 agree on the conic.
    const std::vector<Monomial> basis{Monomial({1, 0, 1}), Monomial({0, 2, 0})};
    CHECK_THROWS_AS(gram_matrix(conic_chart(), 2, basis, options(2000)), NumericError);
    CHECK_THROWS_AS(gram_matrix(conic_chart(), 1, basis, options(10)), std::invalid_argument);
}

TEST_CASE("moment matrices") {
    const std::vector<Monomial> linear{Monomial({1, 0, 0}), Monomial({0, 1, 0}), Monomial({0, 0, 1})};
    const SectionBasis plain{1, linear, CMatrix::Identity(3, 3)};
    const HermitianEstimate M = moment_matrix(conic_chart(), plain, options(40000));
    const double tr_err = std::sqrt(M.std_error.diagonal().array().square().sum());
    CHECK(std::abs(M.value.trace().real() - 2.0) <= 3.0 * tr_err);

    for (int k : {1, 2, 4}) {
        const MCOptions opt = options(60000, 11 + static_cast<std::uint64_t>(k));
        const SectionBasis s = orthonormal_sections(line_chart(), k, line_monomials(k), iota_weights(k), opt);
        const HermitianEstimate Mk = moment_matrix(line_chart(), s, opt);
        const double tr = Mk.value.trace().real();
        CHECK(std::abs(tr - k) <= 3.0 * std::sqrt(Mk.std_error.diagonal().array().square().sum()) + 0.01 * k);
        double off = 0.0;
        for (int a = 0; a <= k; ++a) {
            for (int b = 0; b <= k; ++b) {
                if (a != b) {
                    CHECK(std::abs(Mk.value(a, b)) <= 3.0 * Mk.std_error(a, b) + 1e-3);
                    off = std::max(off, std::abs(Mk.value(a, b)));
                }
            }
        }
        // Deviation from the identity shrinks like 1/k: the exact matrix is k/(k+1) I.
        const double dev = (Mk.value - CMatrix::Identity(k + 1, k + 1)).cwiseAbs().maxCoeff();
        CHECK(dev <= 1.5 / (k + 1));
    }
}

TEST_CASE("energy derivative algebra") {
    std::mt19937 rng(4);
    const CMatrix M = random_pd(rng, 4);
    const CMatrix B1 = random_pd(rng, 4), B2 = random_pd(rng, 4);
    CHECK(energy_derivative(M, CMatrix::Zero(4, 4), 1) == 0.0);
    CHECK(energy_derivative(M, CMatrix::Identity(4, 4), 1) ==
          doctest::Approx(2.0 * 2.0 * M.trace().real()).epsilon(1e-14));
    const double lhs = energy_derivative(M, B1 + B2, 2);
    const double rhs = energy_derivative(M, B1, 2) + energy_derivative(M, B2, 2);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    CHECK_THROWS_AS(energy_derivative(M, CMatrix::Zero(3, 3), 1), std::invalid_argument);
}

TEST_CASE("energy derivative at t = 0 matches the moment matrix estimate") {
    const std::vector<Monomial> linear{Monomial({1, 0, 0}), Monomial({0, 1, 0}), Monomial({0, 0, 1})};
    const MCOptions opt = options(60000, 5);
    const SectionBasis s = orthonormal_sections(conic_chart(), 1, linear, {0, 0, 1}, opt);
    const std::vector<double> lambda{-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0};
    const HermitianEstimate M = moment_matrix(conic_chart(), s, opt);
    CMatrix A = CMatrix::Zero(3, 3);
    for (int a = 0; a < 3; ++a) {
        A(a, a) = lambda[static_cast<std::size_t>(a)];
    }
    const double via_matrix = energy_derivative(M.value, A, 1);
    const MCEstimate direct = energy_derivative_at_t(conic_chart(), s, lambda, 0.0, 1, options(60000, 99));
    double mat_err = 0.0;
    for (int a = 0; a < 3; ++a) {
        mat_err += std::pow(2.0 * 2.0 * lambda[static_cast<std::size_t>(a)] * M.std_error(a, a), 2);
    }
    CHECK(std::abs(via_matrix - direct.value) <= 3.0 * std::sqrt(mat_err + direct.std_error * direct.std_error));
    const MCEstimate zero = energy_derivative_at_t(conic_chart(), s, {0.0, 0.0, 0.0}, -3.0, 1, opt);
    CHECK(zero.value == 0.0);

    // Unitary diagonal conjugation commutes with the generator and changes nothing.
    SectionBasis rotated = s;
    rotated.M = CVector(Eigen::Vector3cd(cdouble(0, 1), cdouble(-1, 0), std::polar(1.0, 0.7))).asDiagonal() * s.M;
    for (double t : {0.0, -1.0, -2.5}) {
        const MCEstimate a = energy_derivative_at_t(conic_chart(), s, lambda, t, 1, opt);
        const MCEstimate b = energy_derivative_at_t(conic_chart(), rotated, lambda, t, 1, opt);
        CHECK(std::abs(a.value - b.value) <= 1e-9);
    }
    // A real diagonal flow by the generator itself shifts the time parameter.
    SectionBasis flowed = s;
    Eigen::Vector3cd scale;
    for (int a = 0; a < 3; ++a) {
        scale(a) = std::exp(-1.0 * lambda[static_cast<std::size_t>(a)]);
    }
    flowed.M = CVector(scale).asDiagonal() * s.M;
    const MCEstimate shifted = energy_derivative_at_t(conic_chart(), flowed, lambda, -1.0, 1, opt);
    const MCEstimate direct2 = energy_derivative_at_t(conic_chart(), s, lambda, -2.0, 1, opt);
    CHECK(std::abs(shifted.value - direct2.value) <= 1e-9);

    // Convexity: the derivative does not increase as t decreases.
    double prev = 1e300;
    MCOptions wide = options(60000, 21);
    wide.law = SamplingLaw::scale_mixture(8);
    for (double t : {0.0, -1.0, -2.0, -4.0, -8.0}) {
        const MCEstimate e = energy_derivative_at_t(conic_chart(), s, lambda, t, 1, wide);
        CHECK(e.value <= prev + 3.0 * e.std_error);
        prev = e.value;
    }
}

TEST_CASE("N2 integral over the double line") {
    const std::vector<double> lambda{-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0};
    const N2Estimate n2 = n2_integral(double_line_cycle(), lambda, options(100000));
    CHECK(n2.value == doctest::Approx(1.0 / 6.0).epsilon(0.02));
    CHECK(n2.mean == doctest::Approx(1.0 / 6.0).epsilon(0.02));
    CHECK(n2.volume == doctest::Approx(2.0).epsilon(0.02));
    const N2Estimate shifted = n2_integral(double_line_cycle(), {1.0 - 1.0 / 3.0, 1.0 - 1.0 / 3.0, 1.0 + 2.0 / 3.0},
                                           options(100000));
    CHECK(std::abs(shifted.value - n2.value) <= 1e-9);
    const N2Estimate trivial = n2_integral(double_line_cycle(), {0.5, 0.5, 0.5}, options(1000));
    CHECK(std::abs(trivial.value) <= 1e-20);
    // Two lines with unit multiplicity: (1/12 + 1/16) + 1/16 = 5/24.
    const Cycle two_lines{Parametrization::parse({"0", "1", "u"}, chart), Parametrization::parse({"1", "u", "0"}, chart)};
    const N2Estimate tl = n2_integral(two_lines, {1.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0}, options(100000));
    CHECK(tl.value == doctest::Approx(5.0 / 24.0).epsilon(0.02));
}

TEST_CASE("equivariant Gram-Schmidt") {
    const GSResult id = equivariant_gram_schmidt({0, 1, 1, 2}, CMatrix::Identity(4, 4));
    CHECK((id.M - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(id.block_weights == std::vector<long>{0, 1, 2});
    CHECK(id.block_sizes == std::vector<std::size_t>{1, 2, 1});
    CHECK_THROWS_AS(equivariant_gram_schmidt({1, 0}, CMatrix::Identity(2, 2)), std::invalid_argument);
    CMatrix singular = CMatrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(equivariant_gram_schmidt({0, 1}, singular), NumericError);

    std::mt19937 rng(15);
    std::uniform_int_distribution<int> groups(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix G = random_pd(rng, 6);
        std::vector<long> w;
        long level = 0;
        while (w.size() < 6) {
            const int size = groups(rng);
            for (int i = 0; i < size && w.size() < 6; ++i) {
                w.push_back(level);
            }
            level += 1 + groups(rng);
        }
        const GSResult gs = equivariant_gram_schmidt(w, G);
        CHECK((gs.M * G * gs.M.adjoint() - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
        for (int a = 0; a < 6; ++a) {
            for (int b = a + 1; b < 6; ++b) {
                CHECK(gs.M(a, b) == cdouble(0.0, 0.0));
            }
        }
        // Within-block unitary change of the input vectors.
        CMatrix U = CMatrix::Zero(6, 6);
        std::size_t start = 0;
        for (std::size_t size : gs.block_sizes) {
            const CMatrix Q = random_pd(rng, static_cast<int>(size)).householderQr().householderQ();
            U.block(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(size),
                    static_cast<Eigen::Index>(size)) = Q;
            start += size;
        }
        const GSResult other = equivariant_gram_schmidt(w, U * G * U.adjoint());
        // Sections: rows of M applied to the basis; other sections use U * basis.
        const CMatrix R = other.M * U * gs.M.inverse();
        CHECK((R * R.adjoint() - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-9);
        start = 0;
        for (std::size_t size : gs.block_sizes) {
            for (Eigen::Index a = 0; a < 6; ++a) {
                for (Eigen::Index b = 0; b < 6; ++b) {
                    const bool same_block = a >= static_cast<Eigen::Index>(start) &&
                                            a < static_cast<Eigen::Index>(start + size) &&
                                            b >= static_cast<Eigen::Index>(start) &&
                                            b < static_cast<Eigen::Index>(start + size);
                    const bool row_in = a >= static_cast<Eigen::Index>(start) && a < static_cast<Eigen::Index>(start + size);
                    if (row_in && !same_block) {
                        CHECK(std::abs(R(a, b)) <= 1e-9);
                    }
                }
            }
            start += size;
        }
    }
}

TEST_CASE("Bergman density") {
    for (int k : {1, 2, 4}) {
        const MCOptions opt = options(100000, 300 + static_cast<std::uint64_t>(k));
        const SectionBasis s = orthonormal_sections(line_chart(), k, line_monomials(k), iota_weights(k), opt);
        for (double r : {0.0, 0.5, 1.0, 3.0, 40.0}) {
            const CVector z = line_chart()[0].point({cdouble(r, 0.2 * r)});
            CHECK(bergman_density(s, z) == doctest::Approx(k + 1.0).epsilon(0.01));
        }
    }
    const std::vector<Monomial> quad = oracle::all_monomials(3, 2);
    std::vector<Monomial> basis;
    std::vector<long> w;
    for (const auto& m : quad) {
        if (m[1] <= 1) {
            basis.push_back(m);
        }
    }
    std::sort(basis.begin(), basis.end(), [](const Monomial& a, const Monomial& b) { return a[2] < b[2]; });
    for (const auto& m : basis) {
        w.push_back(m[2]);
    }
    const MCOptions opt = options(60000, 8);
    const SectionBasis s = orthonormal_sections(conic_chart(), 2, basis, w, opt);
    const MCEstimate total = mc_integrate(conic_chart(), [&](const CVector& z) { return bergman_density(s, z); },
                                          options(60000, 9));
    CHECK(total.value == doctest::Approx(5.0).epsilon(0.03));

    const SectionBasis zero = orthonormal_sections(conic_chart(), 0, {Monomial(3)}, {0}, opt);
    const double rho0 = bergman_density(zero, conic_chart()[0].point({cdouble(0.3, 0.1)}));
    const HermitianEstimate vol = gram_matrix(conic_chart(), 0, {Monomial(3)}, opt);
    CHECK(rho0 == doctest::Approx(1.0 / vol.value(0, 0).real()).epsilon(1e-12));
}
