#include "doctest.h"

#include "kstab/bergman_ray.hpp"
#include "kstab/config.hpp"

#include <cmath>

using namespace kstab;

namespace {

struct Fixture {
    LoadedConfiguration L;
    Degeneration deg;
    AsymptoticReport rep;

    explicit Fixture(const nlohmann::json& doc)
        : L(parse_configuration(doc)), deg(L.config), rep(fit_asymptotics(deg)) {}
    explicit Fixture(const char* path)
        : L(load_configuration(path)), deg(L.config), rep(fit_asymptotics(deg)) {}
};

nlohmann::json conic(std::vector<long> eta) {
    return {{"name", "conic"},
            {"variables", {"x", "y", "z"}},
            {"weights", eta},
            {"generators", {"x*z - y^2"}},
            {"fiber", {{"chart_vars", 1}, {"components", {"1", "u", "u^2"}}}},
            {"points", {{1, 0, 0}, {0, 0, 1}}},
            {"chart_points", nlohmann::json::parse("[[0.1], [0.5], [1.0], [2.0], [10.0], [[0.6, 0.8]]]")}};
}

nlohmann::json line(std::vector<long> eta) {
    return {{"name", "line"},
            {"variables", {"x", "y"}},
            {"weights", eta},
            {"generators", nlohmann::json::array()},
            {"fiber", {{"chart_vars", 1}, {"components", {"1", "u"}}}},
            {"points", {{1, 0}, {0, 1}}},
            {"chart_points", nlohmann::json::parse("[[0.1], [0.5], [1.0], [3.0], [[-1.0, 2.0]]]")}};
}

MCOptions options(std::size_t samples, std::uint64_t seed = 7) {
    MCOptions o;
    o.samples = samples;
    o.seed = seed;
    return o;
}

}  // namespace

TEST_CASE("level embeddings are ordered by weight and orthonormal") {
    Fixture f(conic({0, 0, 1}));
    const LevelEmbedding L = LevelEmbedding::build(f.deg, f.L.fiber, 3, options(40000));
    CHECK(L.sections.monomials.size() == 7);
    CHECK(std::is_sorted(L.weights.begin(), L.weights.end()));
    Rational trace(0);
    for (const auto& q : L.lambda_exact) {
        trace += q;
    }
    CHECK(trace == Rational(0));
    const CMatrix I = L.sections.M * L.gram.value * L.sections.M.adjoint();
    CHECK((I - CMatrix::Identity(7, 7)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK_THROWS_AS(LevelEmbedding::build(f.deg, f.L.fiber, 0, options(10)), std::invalid_argument);
}

TEST_CASE("ray potential at t = 0 on the round line") {
    Fixture f(line({1, 0}));
    for (int k : {1, 2, 4, 8}) {
        const LevelEmbedding L = LevelEmbedding::build(f.deg, f.L.fiber, k, options(100000));
        const double expect = std::log((k + 1.0) / k) / k;
        for (const auto& z : f.L.points) {
            CHECK(std::abs(ray_potential(L, 0.0, z) - expect) <= 0.02 / k);
        }
    }
}

TEST_CASE("ray potential along the double-line flow") {
    Fixture f(conic({0, 0, 1}));
    const CVector pole = f.L.points[1];  // [0:0:1]
    for (int k : {2, 4, 16}) {
        const LevelEmbedding L = LevelEmbedding::build(f.deg, f.L.fiber, k, options(40000));
        const double kk = k;
        const double slope = (kk - kk * kk / (2 * kk + 1)) / kk;
        const double t = -1000.0;
        CHECK(ray_potential(L, t, pole) / (2 * t) == doctest::Approx(slope).epsilon(0.01));
        CHECK(std::isfinite(ray_potential(L, -1e4 / kk, f.L.points[3])));
    }
}

TEST_CASE("ray potentials are convex with bounded slope") {
    Fixture f(conic({0, 0, -1}));
    const std::vector<double> ts = geometric_t_grid(-0.05, -40.0, 60);
    for (int k : {2, 5}) {
        const LevelEmbedding L = LevelEmbedding::build(f.deg, f.L.fiber, k, options(20000));
        const double bound = 2.0 * std::max(std::abs(L.lambda_min()), std::abs(L.lambda_max())) / k +
                             1.0 / std::sqrt(static_cast<double>(k));
        for (const auto& z : f.L.points) {
            std::vector<double> v;
            for (double t : ts) {
                v.push_back(ray_potential(L, t, z));
            }
            for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
                const double slope = (v[i + 1] - v[i]) / (ts[i + 1] - ts[i]);
                CHECK(std::abs(slope) <= bound);
            }
            for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
                const double s1 = (v[i] - v[i - 1]) / (ts[i] - ts[i - 1]);
                const double s2 = (v[i + 1] - v[i]) / (ts[i + 1] - ts[i]);
                // ts decreases, so convexity means the slope decreases along the list
                CHECK(s1 - s2 >= -1e-9);
            }
        }
    }
}

TEST_CASE("trivial action gives a t-independent ray") {
    Fixture f(conic({1, 1, 1}));
    const LevelEmbedding L = LevelEmbedding::build(f.deg, f.L.fiber, 4, options(20000));
    for (const auto& z : f.L.points) {
        const double v0 = ray_potential(L, 0.0, z);
        for (double t : {-0.1, -1.0, -40.0}) {
            CHECK(std::abs(ray_potential(L, t, z) - v0) <= 1e-12);
        }
    }
    const ChowNumericReport c = chow_weight_numeric(L, f.L.fiber, -15.0, options(2000));
    CHECK(c.estimate.value == 0.0);
    const EnergyReport e = ma_mass(f.deg, f.rep, L, f.L.fiber, options(2000));
    CHECK(e.mass == 0.0);
    CHECK(e.mu == Rational(0));
}

TEST_CASE("shifting the weights changes no potential") {
    Fixture a(conic({0, 0, 1}));
    Fixture b(conic({5, 5, 6}));
    for (int k : {1, 3}) {
        const LevelEmbedding La = LevelEmbedding::build(a.deg, a.L.fiber, k, options(10000));
        const LevelEmbedding Lb = LevelEmbedding::build(b.deg, b.L.fiber, k, options(10000));
        CHECK(La.lambda_exact == Lb.lambda_exact);
        for (const auto& z : a.L.points) {
            for (double t : {0.0, -0.5, -20.0}) {
                CHECK(std::abs(ray_potential(La, t, z) - ray_potential(Lb, t, z)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("envelope construction") {
    Fixture f(conic({0, 0, 1}));
    std::vector<LevelEmbedding> levels;
    for (int k : {2, 4, 8}) {
        levels.push_back(LevelEmbedding::build(f.deg, f.L.fiber, k, options(20000)));
    }
    const std::vector<double> ts = geometric_t_grid(-0.1, -40.0, 20);
    const RayGrid g = envelope(levels, ts, f.L.points);
    CHECK(g.eps_k[1] == doctest::Approx(0.5));
    CHECK(g.e_k.back() == 0.0);
    CHECK(g.monotone_boundary);
    CHECK(g.smallest_k_attains_near_zero);
    for (std::size_t ki = 0; ki + 1 < levels.size(); ++ki) {
        CHECK(g.c_k[ki] > g.c_k[ki + 1]);
    }
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        for (std::size_t x = 0; x < f.L.points.size(); ++x) {
            double tail = -1e300;
            for (std::size_t ki = 0; ki < levels.size(); ++ki) {
                CHECK(g.envelope[ti][x] >= g.shifted[ki][ti][x]);
                if (ki > 0) {
                    tail = std::max(tail, g.shifted[ki][ti][x]);
                }
            }
            CHECK(g.envelope[ti][x] >= tail);
            CHECK(g.envelope_usc[ti][x] >= g.envelope[ti][x]);
            CHECK(g.psi[1][ti][x] == doctest::Approx(4.0 * (g.phi[1][ti][x] - g.phi0[1][x])));
        }
    }
    CHECK_THROWS_AS(envelope({levels[0], levels[1]}, ts, f.L.points), std::invalid_argument);
    CHECK_THROWS_AS(envelope({levels[1], levels[0], levels[2]}, ts, f.L.points), std::invalid_argument);
    CHECK_THROWS_AS(envelope(levels, {0.5}, f.L.points), std::invalid_argument);

    // Sup growth: dominant monomial slope 2|lambda_min|/k (which tends to 1) plus the tilt.
    const std::size_t far = ts.size() - 1;
    double sup = -1e300;
    for (double v : g.envelope[far]) {
        sup = std::max(sup, v);
    }
    double slope = 0.0;
    for (const auto& L : levels) {
        const double k = L.k;
        slope = std::max(slope, 2.0 * (k * k / (2 * k + 1)) / k + 1.0 / std::sqrt(k));
    }
    CHECK(sup / std::abs(ts[far]) == doctest::Approx(slope).epsilon(0.05));
}

TEST_CASE("trivial envelope is flat up to the tilts") {
    Fixture f(conic({2, 2, 2}));
    std::vector<LevelEmbedding> levels;
    for (int k : {2, 4, 8}) {
        levels.push_back(LevelEmbedding::build(f.deg, f.L.fiber, k, options(20000)));
    }
    const std::vector<double> ts = geometric_t_grid(-0.1, -10.0, 8);
    const RayGrid g = envelope(levels, ts, f.L.points);
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        for (std::size_t x = 0; x < f.L.points.size(); ++x) {
            double expect = -1e300;
            for (std::size_t ki = 0; ki < levels.size(); ++ki) {
                expect = std::max(expect, g.phi0[ki][x] + g.c_k[ki] - g.eps_k[ki] * ts[ti]);
            }
            CHECK(g.envelope[ti][x] == doctest::Approx(expect).epsilon(1e-12));
        }
    }
    const auto rows = sup_osc_report(g, levels, 2);
    for (const auto& r : rows) {
        CHECK(r.osc == doctest::Approx(rows.front().osc).epsilon(1e-9));
        CHECK(r.osc <= 0.03);
    }
}

TEST_CASE("sup and oscillation on the double line") {
    Fixture f("data/conic_double_line.json");
    std::vector<LevelEmbedding> levels;
    for (int k : {2, 4, 8}) {
        levels.push_back(LevelEmbedding::build(f.deg, f.L.fiber, k, options(20000)));
    }
    const RayGrid g = envelope(levels, {-1.0, -10.0, -20.0}, f.L.points);
    const auto rows = sup_osc_report(g, levels, 2);
    const double lam = 64.0 / 17.0 / 8.0;
    CHECK(std::abs(levels[2].lambda_min()) / 8.0 == doctest::Approx(lam));
    for (const auto& r : rows) {
        CHECK(r.sup <= r.upper_bound + 1e-12);
    }
    CHECK(rows[2].sup_over_2t == doctest::Approx(lam).epsilon(0.03));
    CHECK(rows[2].osc / 20.0 >= 1.5);
    CHECK(rows[2].osc / 20.0 <= 2.1);
}

TEST_CASE("Chow weight numeric limit at k = 1") {
    Fixture f("data/conic_double_line.json");
    const LevelEmbedding L = LevelEmbedding::build(f.deg, f.L.fiber, 1, options(40000));
    const ChowNumericReport c = chow_weight_numeric(L, f.L.fiber, -15.0, options(200000));
    CHECK(std::abs(c.estimate.value - 2.0 / 3.0) <= 3.0 * c.estimate.std_error);
    CHECK(c.convexity_ok);
    CHECK(c.convergence_gap <= 4.0 * std::hypot(c.estimate.std_error, c.twice.std_error));
    CHECK_THROWS_AS(chow_weight_numeric(L, f.L.fiber, 1.0, options(10)), std::invalid_argument);
}

TEST_CASE("mass budget on the double line") {
    Fixture f("data/conic_double_line.json");
    for (int k : {2, 3, 4}) {
        const LevelEmbedding L = LevelEmbedding::build(f.deg, f.L.fiber, k, options(20000));
        const EnergyReport e = ma_mass(f.deg, f.rep, L, f.L.fiber, options(20000, 99));
        CHECK(e.mass >= -5.0 * e.mass_stderr);
        CHECK(e.edot_minus_inf == -e.mu);
        CHECK(e.mu == chow_weight_algebraic(f.deg, f.rep, k).mu);
        CHECK(e.mass_times_k == doctest::Approx(k * e.mass));
    }
}

TEST_CASE("ray comparison") {
    Fixture f(line({0, 0}));
    const std::vector<double> ts = geometric_t_grid(-0.1, -40.0, 12);
    const LevelEmbedding l4 = LevelEmbedding::build(f.deg, f.L.fiber, 4, options(40000));
    const LevelEmbedding l8 = LevelEmbedding::build(f.deg, f.L.fiber, 8, options(40000));
    const RayComparison same = ray_comparison(f.deg, f.rep, l4, l4, ts, f.L.points);
    CHECK(same.max_abs == 0.0);
    const RayComparison c = ray_comparison(f.deg, f.rep, l4, l8, ts, f.L.points);
    CHECK(c.max_abs <= 0.1);
    CHECK_THROWS_AS(ray_comparison(f.deg, f.rep, l8, l4, ts, f.L.points), std::invalid_argument);

    Fixture dl("data/conic_double_line.json");
    const LevelEmbedding d4 = LevelEmbedding::build(dl.deg, dl.L.fiber, 4, options(20000));
    const LevelEmbedding d8 = LevelEmbedding::build(dl.deg, dl.L.fiber, 8, options(20000));
    const RayComparison r = ray_comparison(dl.deg, dl.rep, d4, d8, geometric_t_grid(-0.1, -40.0, 40), dl.L.points);
    CHECK(r.ratio <= 1.2);
    CHECK(r.g.size() == 40);
}
