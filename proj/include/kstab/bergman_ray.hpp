#pragma once

#include "kstab/asymptotics.hpp"
#include "kstab/numeric.hpp"

#include <vector>

namespace kstab {

/// Level-k embedding of the generic fiber by sections orthonormal for the
/// ambient Fubini-Study metric, ordered by ascending weight, together with the
/// traceless generator A_k acting diagonally on them.
struct LevelEmbedding {
    int k = 0;
    int n = 0;
    SectionBasis sections;
    std::vector<long> weights;           // b per section
    std::vector<Rational> lambda_exact;  // diagonal of A_k
    std::vector<double> lambda;
    HermitianEstimate gram;

    /// Gram matrix of the standard monomials over `fiber` (seed mixed with k),
    /// then equivariant Gram-Schmidt.
    static LevelEmbedding build(const Degeneration& deg, const Cycle& fiber, int k, const MCOptions& options);

    double lambda_min() const;
    double lambda_max() const;
};

/// phi(t;k)(z) = (1/k) log(k^{-n} sum_a e^{2 t lambda_a} |s_a(z)|^2 / |z|^{2k}),
/// evaluated by log-sum-exp.
double ray_potential(const LevelEmbedding& level, double t, const CVector& z);

/// Geometric grid from t_near down to t_far (both negative), t_near first.
std::vector<double> geometric_t_grid(double t_near, double t_far, int steps);

struct RayGrid {
    std::vector<double> t_grid;
    std::vector<CVector> points;
    std::vector<int> k_set;
    /// phi[k][t][x], and phi0[k][x] = phi(0;k)(x).
    std::vector<std::vector<std::vector<double>>> phi;
    std::vector<std::vector<double>> phi0;
    /// psi[k][t][x] = k (phi(t;k) - phi(0;k)).
    std::vector<std::vector<std::vector<double>>> psi;
    std::vector<double> e_k;    // max_x |phi(0;k) - phi(0;k_max)|
    std::vector<double> c_k;
    std::vector<double> eps_k;  // k^{-1/2}
    /// shifted[k][t][x] = phi(t;k) + c_k - eps_k t.
    std::vector<std::vector<std::vector<double>>> shifted;
    /// envelope[t][x] = max_k shifted; envelope_usc takes a max over t-neighbours too.
    std::vector<std::vector<double>> envelope;
    std::vector<std::vector<double>> envelope_usc;
    std::vector<std::vector<int>> attaining_k;
    /// phi(0;k) + c_k strictly decreasing in k at every point.
    bool monotone_boundary = false;
    /// max_x |envelope(t_near) - phi(0;k_max)| at the grid time closest to 0.
    double boundary_continuity = 0.0;
    /// Same, against the shifted boundary phi(0;k_max) + c_{k_max}.
    double boundary_continuity_shifted = 0.0;
    /// At the grid time closest to 0 the smallest k attains the envelope everywhere.
    bool smallest_k_attains_near_zero = false;
};

/// Levels must have ascending, distinct k, at least three of them.
RayGrid envelope(const std::vector<LevelEmbedding>& levels, const std::vector<double>& t_grid,
                 const std::vector<CVector>& points);

struct SupOscRow {
    double t = 0.0;
    double sup = 0.0;
    double inf = 0.0;
    double osc = 0.0;
    double sup_over_2t = 0.0;
    /// 2|t| |lambda_min| / k - n log k / k.
    double lower_bound = 0.0;
    /// 2|t| |lambda_min| / k + max_x phi(0;k).
    double upper_bound = 0.0;
};

/// Per-t statistics over the points of level index ki of the grid.
std::vector<SupOscRow> sup_osc_report(const RayGrid& grid, const std::vector<LevelEmbedding>& levels,
                                      std::size_t ki);

struct ChowNumericReport {
    int k = 0;
    double t_probe = 0.0;
    /// -Edot(t_probe), the estimate of the Chow weight.
    MCEstimate estimate;
    /// -Edot(t_probe / 2), for the convexity direction check.
    MCEstimate half;
    /// -Edot(2 t_probe), for the convergence gap.
    MCEstimate twice;
    double convergence_gap = 0.0;
    bool convexity_ok = false;
};

ChowNumericReport chow_weight_numeric(const LevelEmbedding& level, const Cycle& fiber, double t_probe,
                                      const MCOptions& options);

struct EnergyReport {
    int k = 0;
    /// (n+1) 2 Tr(A_k M) with M the moment matrix over the level-k image.
    double edot_zero = 0.0;
    double edot_zero_stderr = 0.0;
    Rational mu;               // exact Chow weight at r = k
    Rational edot_minus_inf;   // -mu
    double mass = 0.0;
    double mass_stderr = 0.0;
    double mass_times_k = 0.0;
    bool consistent = true;
};

/// mass = (1/(n+1)) k^{-(n+1)} [Edot(0) - Edot(-inf)].
EnergyReport ma_mass(const Degeneration& deg, const AsymptoticReport& report, const LevelEmbedding& level,
                     const Cycle& fiber, const MCOptions& options);

struct RayComparison {
    int k = 0;
    int l = 0;
    /// g[t][x] = [phi(t;l) + 2t f(l)] - [phi(t;k) + 2t f(k)].
    std::vector<std::vector<double>> g;
    double max_abs = 0.0;
    double max_near = 0.0;  // t in [-20, 0]
    double max_far = 0.0;   // t in [-40, -20]
    double ratio = 0.0;     // max_far / max_near
};

RayComparison ray_comparison(const Degeneration& deg, const AsymptoticReport& report, const LevelEmbedding& lk,
                             const LevelEmbedding& ll, const std::vector<double>& t_grid,
                             const std::vector<CVector>& points);

}  // namespace kstab
