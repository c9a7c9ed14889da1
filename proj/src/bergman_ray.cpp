#include "kstab/bergman_ray.hpp"

#include "kstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace kstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sum_{j >= k} j^{-2}
double zeta2_tail(int k) {
    double head = 0.0;
    for (int j = 1; j < k; ++j) {
        head += 1.0 / (static_cast<double>(j) * static_cast<double>(j));
    }
    return kPi * kPi / 6.0 - head;
}

std::size_t nearest_zero_index(const std::vector<double>& t_grid) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (std::abs(t_grid[i]) < std::abs(t_grid[best])) {
            best = i;
        }
    }
    return best;
}

}  // namespace

LevelEmbedding LevelEmbedding::build(const Degeneration& deg, const Cycle& fiber, int k, const MCOptions& options) {
    if (k < 1) {
        throw std::invalid_argument("level embedding: k must be at least 1");
    }
    if (fiber.empty()) {
        throw std::invalid_argument("level embedding: the fiber needs a parametrization");
    }
    for (const auto& p : fiber) {
        if (p.ambient() != deg.nvars()) {
            throw ValidationError("fiber parametrization has " + std::to_string(p.ambient()) +
                                  " coordinates, expected " + std::to_string(deg.nvars()));
        }
    }
    const GradedSlice& slice = deg.slice(k);
    std::vector<std::size_t> order(slice.monomials.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return slice.b_spectrum[a] < slice.b_spectrum[b]; });

    LevelEmbedding level;
    level.k = k;
    level.n = deg.dimension();
    level.sections.k = k;
    for (std::size_t i : order) {
        level.sections.monomials.push_back(slice.monomials[i]);
        level.weights.push_back(slice.b_spectrum[i]);
        level.lambda_exact.push_back(slice.a_spectrum[i]);
        level.lambda.push_back(slice.a_spectrum[i].to_double());
    }
    MCOptions opt = options;
    opt.seed = mix_seed(options.seed, static_cast<std::uint64_t>(k));
    level.gram = gram_matrix(fiber, k, level.sections.monomials, opt);
    level.sections.M = equivariant_gram_schmidt(level.weights, level.gram.value).M;
    return level;
}

double LevelEmbedding::lambda_min() const {
    return lambda.empty() ? 0.0 : *std::min_element(lambda.begin(), lambda.end());
}

double LevelEmbedding::lambda_max() const {
    return lambda.empty() ? 0.0 : *std::max_element(lambda.begin(), lambda.end());
}

double ray_potential(const LevelEmbedding& level, double t, const CVector& z) {
    const CVector s = level.sections.M * normalized_monomials(level.sections.monomials, z);
    double top = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(static_cast<std::size_t>(s.size()));
    for (Eigen::Index a = 0; a < s.size(); ++a) {
        const double mod2 = std::norm(s(a));
        const double v = mod2 > 0.0 ? 2.0 * t * level.lambda[static_cast<std::size_t>(a)] + std::log(mod2)
                                    : -std::numeric_limits<double>::infinity();
        terms[static_cast<std::size_t>(a)] = v;
        top = std::max(top, v);
    }
    if (!std::isfinite(top)) {
        throw NumericError("indeterminate point: every section vanishes");
    }
    double sum = 0.0;
    for (double v : terms) {
        sum += std::exp(v - top);
    }
    const double k = static_cast<double>(level.k);
    return (top + std::log(sum) - static_cast<double>(level.n) * std::log(k)) / k;
}

std::vector<double> geometric_t_grid(double t_near, double t_far, int steps) {
    if (!(t_near < 0.0) || !(t_far < t_near) || steps < 2) {
        throw std::invalid_argument("t-grid needs t_far < t_near < 0 and at least two steps");
    }
    std::vector<double> out;
    const double ratio = std::log(t_far / t_near) / static_cast<double>(steps - 1);
    for (int i = 0; i < steps; ++i) {
        out.push_back(t_near * std::exp(ratio * static_cast<double>(i)));
    }
    out.back() = t_far;
    return out;
}

RayGrid envelope(const std::vector<LevelEmbedding>& levels, const std::vector<double>& t_grid,
                 const std::vector<CVector>& points) {
    if (levels.size() < 3) {
        throw std::invalid_argument("envelope: at least three levels are required");
    }
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (levels[i].k <= levels[i - 1].k) {
            throw std::invalid_argument("envelope: levels must have ascending k");
        }
    }
    if (t_grid.empty() || points.empty()) {
        throw std::invalid_argument("envelope: empty t-grid or point set");
    }
    for (double t : t_grid) {
        if (t > 0.0) {
            throw std::invalid_argument("envelope: t-grid must be non-positive");
        }
    }
    const std::size_t nk = levels.size(), nt = t_grid.size(), nx = points.size();
    RayGrid g;
    g.t_grid = t_grid;
    g.points = points;
    g.phi.assign(nk, std::vector<std::vector<double>>(nt, std::vector<double>(nx)));
    g.psi = g.phi;
    g.shifted = g.phi;
    g.phi0.assign(nk, std::vector<double>(nx));
    for (std::size_t ki = 0; ki < nk; ++ki) {
        const LevelEmbedding& L = levels[ki];
        g.k_set.push_back(L.k);
        for (std::size_t x = 0; x < nx; ++x) {
            g.phi0[ki][x] = ray_potential(L, 0.0, points[x]);
            if (!std::isfinite(g.phi0[ki][x])) {
                throw NumericError("phi(0;k) is not finite at point " + std::to_string(x));
            }
            for (std::size_t ti = 0; ti < nt; ++ti) {
                const double v = ray_potential(L, t_grid[ti], points[x]);
                g.phi[ki][ti][x] = v;
                g.psi[ki][ti][x] = static_cast<double>(L.k) * (v - g.phi0[ki][x]);
            }
        }
    }

    // Replacement shifts from the measured boundary gaps.
    const std::size_t top = nk - 1;
    double C = 0.0;
    for (std::size_t ki = 0; ki < nk; ++ki) {
        double e = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            e = std::max(e, std::abs(g.phi0[ki][x] - g.phi0[top][x]));
        }
        g.e_k.push_back(e);
        const double k = static_cast<double>(levels[ki].k);
        C = std::max(C, k * k * e);
    }
    for (std::size_t ki = 0; ki < nk; ++ki) {
        g.c_k.push_back(2.0 * C * zeta2_tail(levels[ki].k));
        g.eps_k.push_back(1.0 / std::sqrt(static_cast<double>(levels[ki].k)));
    }
    g.monotone_boundary = true;
    for (std::size_t ki = 0; ki + 1 < nk; ++ki) {
        for (std::size_t x = 0; x < nx; ++x) {
            if (!(g.phi0[ki][x] + g.c_k[ki] > g.phi0[ki + 1][x] + g.c_k[ki + 1])) {
                g.monotone_boundary = false;
            }
        }
    }

    g.envelope.assign(nt, std::vector<double>(nx, -std::numeric_limits<double>::infinity()));
    g.attaining_k.assign(nt, std::vector<int>(nx, 0));
    for (std::size_t ki = 0; ki < nk; ++ki) {
        for (std::size_t ti = 0; ti < nt; ++ti) {
            for (std::size_t x = 0; x < nx; ++x) {
                const double v = g.phi[ki][ti][x] + g.c_k[ki] - g.eps_k[ki] * t_grid[ti];
                g.shifted[ki][ti][x] = v;
                if (v > g.envelope[ti][x]) {
                    g.envelope[ti][x] = v;
                    g.attaining_k[ti][x] = levels[ki].k;
                }
            }
        }
    }
    // Grid surrogate for the upper semicontinuous regularization.
    std::vector<std::size_t> by_t(nt);
    std::iota(by_t.begin(), by_t.end(), std::size_t{0});
    std::sort(by_t.begin(), by_t.end(), [&](std::size_t a, std::size_t b) { return t_grid[a] < t_grid[b]; });
    g.envelope_usc = g.envelope;
    for (std::size_t r = 0; r < nt; ++r) {
        const std::size_t ti = by_t[r];
        for (std::size_t x = 0; x < nx; ++x) {
            double v = g.envelope[ti][x];
            if (r > 0) {
                v = std::max(v, g.envelope[by_t[r - 1]][x]);
            }
            if (r + 1 < nt) {
                v = std::max(v, g.envelope[by_t[r + 1]][x]);
            }
            g.envelope_usc[ti][x] = v;
        }
    }

    const std::size_t t0 = nearest_zero_index(t_grid);
    g.smallest_k_attains_near_zero = true;
    for (std::size_t x = 0; x < nx; ++x) {
        g.boundary_continuity = std::max(g.boundary_continuity, std::abs(g.envelope[t0][x] - g.phi0[top][x]));
        g.boundary_continuity_shifted =
            std::max(g.boundary_continuity_shifted, std::abs(g.envelope[t0][x] - g.phi0[top][x] - g.c_k[top]));
        if (g.attaining_k[t0][x] != levels.front().k) {
            g.smallest_k_attains_near_zero = false;
        }
    }
    return g;
}

std::vector<SupOscRow> sup_osc_report(const RayGrid& grid, const std::vector<LevelEmbedding>& levels,
                                      std::size_t ki) {
    if (ki >= grid.phi.size() || ki >= levels.size()) {
        throw std::out_of_range("sup_osc_report: level index out of range");
    }
    const LevelEmbedding& L = levels[ki];
    const double k = static_cast<double>(L.k);
    const double lam = std::abs(L.lambda_min());
    const double phi0_max = *std::max_element(grid.phi0[ki].begin(), grid.phi0[ki].end());
    std::vector<SupOscRow> rows;
    for (std::size_t ti = 0; ti < grid.t_grid.size(); ++ti) {
        const auto& v = grid.phi[ki][ti];
        SupOscRow r;
        r.t = grid.t_grid[ti];
        r.sup = *std::max_element(v.begin(), v.end());
        r.inf = *std::min_element(v.begin(), v.end());
        r.osc = r.sup - r.inf;
        r.sup_over_2t = r.t != 0.0 ? r.sup / (2.0 * std::abs(r.t)) : 0.0;
        r.lower_bound = 2.0 * std::abs(r.t) * lam / k - static_cast<double>(L.n) * std::log(k) / k;
        r.upper_bound = 2.0 * std::abs(r.t) * lam / k + phi0_max;
        rows.push_back(r);
    }
    return rows;
}

ChowNumericReport chow_weight_numeric(const LevelEmbedding& level, const Cycle& fiber, double t_probe,
                                      const MCOptions& options) {
    if (t_probe > 0.0) {
        throw std::invalid_argument("chow_weight_numeric: t_probe must be non-positive");
    }
    const double spread = level.lambda_max() - level.lambda_min();
    auto minus_edot = [&](double t) {
        MCOptions opt = options;
        opt.law = SamplingLaw::for_flow(t, spread);
        MCEstimate e = energy_derivative_at_t(fiber, level.sections, level.lambda, t, level.n, opt);
        e.value = -e.value;
        e.quarter_value = -e.quarter_value;
        return e;
    };
    ChowNumericReport out;
    out.k = level.k;
    out.t_probe = t_probe;
    out.estimate = minus_edot(t_probe);
    out.half = minus_edot(0.5 * t_probe);
    out.twice = minus_edot(2.0 * t_probe);
    out.convergence_gap = std::abs(out.estimate.value - out.twice.value);
    // -Edot is nondecreasing as t decreases.
    out.convexity_ok = out.estimate.value >= out.half.value - 3.0 * out.half.std_error;
    return out;
}

EnergyReport ma_mass(const Degeneration& deg, const AsymptoticReport& report, const LevelEmbedding& level,
                     const Cycle& fiber, const MCOptions& options) {
    EnergyReport out;
    out.k = level.k;
    const MCEstimate e0 = energy_derivative_at_t(fiber, level.sections, level.lambda, 0.0, level.n, options);
    out.edot_zero = e0.value;
    out.edot_zero_stderr = e0.std_error;
    out.consistent = e0.consistent;
    out.mu = chow_weight_algebraic(deg, report, level.k).mu;
    out.edot_minus_inf = -out.mu;
    const double scale =
        1.0 / (static_cast<double>(level.n + 1) * std::pow(static_cast<double>(level.k), level.n + 1));
    out.mass = scale * (out.edot_zero + out.mu.to_double());
    out.mass_stderr = scale * out.edot_zero_stderr;
    out.mass_times_k = out.mass * static_cast<double>(level.k);
    return out;
}

RayComparison ray_comparison(const Degeneration& deg, const AsymptoticReport& report, const LevelEmbedding& lk,
                             const LevelEmbedding& ll, const std::vector<double>& t_grid,
                             const std::vector<CVector>& points) {
    if (lk.k > ll.k) {
        throw std::invalid_argument("ray_comparison: expects k <= l");
    }
    RayComparison out;
    out.k = lk.k;
    out.l = ll.k;
    const double fk = futaki_f(deg, report, lk.k).to_double();
    const double fl = futaki_f(deg, report, ll.k).to_double();
    for (double t : t_grid) {
        std::vector<double> row;
        for (const auto& z : points) {
            const double v = (ray_potential(ll, t, z) + 2.0 * t * fl) - (ray_potential(lk, t, z) + 2.0 * t * fk);
            row.push_back(v);
            out.max_abs = std::max(out.max_abs, std::abs(v));
            if (t >= -20.0 && t <= 0.0) {
                out.max_near = std::max(out.max_near, std::abs(v));
            }
            if (t >= -40.0 && t <= -20.0) {
                out.max_far = std::max(out.max_far, std::abs(v));
            }
        }
        out.g.push_back(std::move(row));
    }
    out.ratio = out.max_near > 0.0 ? out.max_far / out.max_near : 0.0;
    return out;
}

}  // namespace kstab
