#pragma once

#include "kstab/spectra.hpp"
#include "kstab/univariate.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace kstab {

/// Hard cap on the degrees searched for a stable interpolation window.
inline constexpr int kMaxStableDegree = 64;

struct AsymptoticReport {
    int n = 0;
    UniPoly hilbert_poly;   // d_k, degree n
    UniPoly weight_poly;    // w_k, degree <= n+1
    UniPoly sum_sq_poly;    // sum of b^2 over the spectrum, degree <= n+2
    std::pair<int, int> stability_window{0, 0};
    int validated_through = 0;
    Rational F0;
    Rational F1;
    Rational n2_sq;
    /// Slopes of the minimal and next-minimal normalized eigenvalues.
    std::optional<Rational> Lambda;
    bool Lambda_exact = false;
    std::optional<Rational> Gamma;
    bool Gamma_exact = false;
    bool trivial_action = false;
};

/// Throws UnstableHilbertData when no window below kMaxStableDegree validates.
AsymptoticReport fit_asymptotics(const Degeneration& deg, int k_start = 1);

/// w_k / (k d_k) - F_0.
Rational futaki_f(const Degeneration& deg, const AsymptoticReport& report, int k);

struct OperatorNormReport {
    Rational C_star;
    Rational budget;
    bool pass = false;
};

/// max_{1<=k<=k_max} max|lambda|/k against max|eta| + |F_0| + 1.
OperatorNormReport operator_norm_check(const Degeneration& deg, const AsymptoticReport& report, int k_max);

struct ChowReport {
    int r = 0;
    Rational mu;
    UniPoly tilde_w;           // p -> w(rp) r d_r - w(r) rp d_{rp}
    std::pair<int, int> p_window{0, 0};
    Rational c_X_omega;        // a_n / (n+1)!
    Rational futaki_residual;  // -c mu / r^n - F_1
    /// Same residual with the volume factor a_n^2 divided out of mu / r^n.
    Rational normalized_residual;
};

ChowReport chow_weight_algebraic(const Degeneration& deg, const AsymptoticReport& report, int r);

}  // namespace kstab
