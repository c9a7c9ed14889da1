#include "kstab/cli.hpp"

#include "kstab/bergman_ray.hpp"
#include "kstab/config.hpp"
#include "kstab/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace kstab {

namespace {

using nlohmann::json;

// Largest level accepted for numeric commands; Gram matrices grow like d_k^2.
constexpr int kMaxLevel = 64;

struct RunConfig {
    std::string command;
    std::string input;
    std::vector<int> k_list;
    int kmax = 0;
    int r = 10;
    std::string t_grid = "-0.1:-40:40";
    std::size_t samples = 100000;
    std::uint64_t seed = 7;
    std::size_t workers = 1;
    std::string out_dir;
    double tol_sigma = 3.0;
    double tol_boundary = 0.05;
    double tol_ratio = 1.2;
    double t_probe = -15.0;
};

std::string exact(const Rational& q) { return q.to_string(); }

json poly_json(const UniPoly& p) {
    json coeffs = json::array();
    for (const auto& c : p.coefficients()) {
        coeffs.push_back(exact(c));
    }
    return {{"text", p.to_string("k")}, {"coefficients", coeffs}};
}

std::string monomial_text(const Monomial& m, const std::vector<std::string>& vars) {
    return Polynomial::monomial(m).to_string(vars);
}

MCOptions mc_options(const RunConfig& rc) {
    MCOptions o;
    o.samples = rc.samples;
    o.seed = rc.seed;
    o.workers = rc.workers;
    return o;
}

json mc_json(const MCEstimate& e) {
    return {{"value", e.value},           {"stderr", e.std_error},
            {"samples", e.samples},       {"quarter_value", e.quarter_value},
            {"quarter_stderr", e.quarter_stderr}, {"consistent", e.consistent}};
}

std::vector<double> parse_t_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw ValidationError("--t-grid expects min:max:steps, got \"" + text + "\"");
    }
    try {
        const double a = std::stod(parts[0]);
        const double b = std::stod(parts[1]);
        const int steps = std::stoi(parts[2]);
        // Either endpoint order is accepted; the grid runs from the one nearer 0.
        const double near = std::abs(a) < std::abs(b) ? a : b;
        const double far = std::abs(a) < std::abs(b) ? b : a;
        return geometric_t_grid(near, far, steps);
    } catch (const std::invalid_argument& e) {
        throw ValidationError("--t-grid \"" + text + "\": " + e.what());
    } catch (const std::out_of_range&) {
        throw ValidationError("--t-grid \"" + text + "\": value out of range");
    }
}

std::vector<int> levels_or(const RunConfig& rc, std::vector<int> fallback) {
    std::vector<int> ks = rc.k_list.empty() ? std::move(fallback) : rc.k_list;
    for (int k : ks) {
        if (k < 1 || k > kMaxLevel) {
            throw ValidationError("level " + std::to_string(k) + " outside 1.." + std::to_string(kMaxLevel));
        }
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

void need_fiber(const LoadedConfiguration& L, const std::string& command) {
    if (L.fiber.empty()) {
        throw ValidationError("command " + command + " needs a \"fiber\" parametrization in the configuration");
    }
    if (L.points.empty()) {
        throw ValidationError("command " + command + " needs \"points\" or \"chart_points\" in the configuration");
    }
}

// ------------------------------------------------------------------ commands

json flat_limit_json(const LoadedConfiguration& L, const Degeneration& deg, const AsymptoticReport& rep) {
    const auto& vars = L.config.variables;
    json basis = json::array(), initial = json::array(), leading = json::array();
    for (const auto& g : deg.basis().elements) {
        basis.push_back(g.to_string(vars, deg.basis().order));
    }
    for (const auto& g : deg.initial().generators) {
        initial.push_back(g.to_string(vars, deg.basis().order));
    }
    for (const auto& m : deg.initial().leading) {
        leading.push_back(monomial_text(m, vars));
    }
    return {{"groebner_basis", basis},
            {"initial_ideal", initial},
            {"leading_monomials", leading},
            {"dimension", deg.dimension()},
            {"hilbert_polynomial", poly_json(rep.hilbert_poly)}};
}

json spectrum_json(const LoadedConfiguration& L, const Degeneration& deg, const std::vector<int>& ks) {
    json rows = json::array();
    for (int k : ks) {
        const GradedSlice& s = deg.slice(k);
        json monos = json::array(), a = json::array();
        for (const auto& m : s.monomials) {
            monos.push_back(monomial_text(m, L.config.variables));
        }
        for (const auto& q : s.a_spectrum) {
            a.push_back(exact(q));
        }
        json row = {{"k", k},
                    {"d_k", s.d_k},
                    {"w_k", exact(s.w_k)},
                    {"monomials", monos},
                    {"b_spectrum", s.b_spectrum},
                    {"a_spectrum", a},
                    {"tr_a_sq", exact(s.tr_a_sq)},
                    {"lambda_min", exact(s.lambda_min)},
                    {"lambda_next", s.lambda_next ? json(exact(*s.lambda_next)) : json(nullptr)}};
        rows.push_back(row);
    }
    return rows;
}

json futaki_json(const Degeneration& deg, const AsymptoticReport& rep, int kmax) {
    const OperatorNormReport op = operator_norm_check(deg, rep, kmax);
    json f = json::array();
    for (int k = 1; k <= std::min(kmax, 10); ++k) {
        f.push_back({{"k", k}, {"f", exact(futaki_f(deg, rep, k))}});
    }
    return {{"n", rep.n},
            {"hilbert_polynomial", poly_json(rep.hilbert_poly)},
            {"weight_polynomial", poly_json(rep.weight_poly)},
            {"square_sum_polynomial", poly_json(rep.sum_sq_poly)},
            {"stability_window", {rep.stability_window.first, rep.stability_window.second}},
            {"validated_through", rep.validated_through},
            {"F_0", exact(rep.F0)},
            {"F_1", exact(rep.F1)},
            {"N2_sq", exact(rep.n2_sq)},
            {"Lambda", rep.Lambda ? json(exact(*rep.Lambda)) : json(nullptr)},
            {"Lambda_exact", rep.Lambda_exact},
            {"Gamma", rep.Gamma ? json(exact(*rep.Gamma)) : json(nullptr)},
            {"Gamma_exact", rep.Gamma_exact},
            {"trivial_action", rep.trivial_action},
            {"f", f},
            {"operator_norm",
             {{"k_max", kmax}, {"C_star", exact(op.C_star)}, {"budget", exact(op.budget)}, {"pass", op.pass}}}};
}

json chow_json(const Degeneration& deg, const AsymptoticReport& rep, int rmax) {
    json rows = json::array();
    Rational C(0);
    for (int r = 1; r <= rmax; ++r) {
        const ChowReport c = chow_weight_algebraic(deg, rep, r);
        rows.push_back({{"r", r},
                        {"mu", exact(c.mu)},
                        {"tilde_w", poly_json(c.tilde_w)},
                        {"p_window", {c.p_window.first, c.p_window.second}},
                        {"c_X_omega", exact(c.c_X_omega)},
                        {"futaki_residual", exact(c.futaki_residual)},
                        {"normalized_residual", exact(c.normalized_residual)}});
        C = std::max(C, Rational(r) * c.futaki_residual.abs());
    }
    return {{"rows", rows}, {"fitted_C", exact(C)}};
}

json chow_numeric_json(const LoadedConfiguration& L, const Degeneration& deg, const AsymptoticReport& rep,
                       const RunConfig& rc) {
    const LevelEmbedding level = LevelEmbedding::build(deg, L.fiber, 1, mc_options(rc));
    const ChowNumericReport c = chow_weight_numeric(level, L.fiber, rc.t_probe, mc_options(rc));
    const Rational mu = chow_weight_algebraic(deg, rep, 1).mu;
    return {{"k", 1},
            {"t_probe", c.t_probe},
            {"estimate", mc_json(c.estimate)},
            {"half_probe", mc_json(c.half)},
            {"double_probe", mc_json(c.twice)},
            {"convergence_gap", c.convergence_gap},
            {"convexity_ok", c.convexity_ok},
            {"exact_mu", exact(mu)}};
}

json n2_json(const LoadedConfiguration& L, const AsymptoticReport& rep, const RunConfig& rc) {
    if (L.cycle.empty()) {
        throw ValidationError("command n2 needs a \"cycle\" in the configuration");
    }
    std::vector<double> lambda;
    for (long e : L.config.eta.values()) {
        lambda.push_back(static_cast<double>(e));
    }
    const N2Estimate est = n2_integral(L.cycle, lambda, mc_options(rc));
    const double spectral = rep.n2_sq.to_double();
    return {{"spectral", exact(rep.n2_sq)},
            {"integral", est.value},
            {"stderr", est.std_error},
            {"mean", est.mean},
            {"volume", est.volume},
            {"consistent", est.consistent},
            {"relative_difference", spectral != 0.0 ? std::abs(est.value - spectral) / spectral : est.value},
            {"within_tolerance", std::abs(est.value - spectral) <= rc.tol_sigma * est.std_error}};
}

std::vector<LevelEmbedding> build_levels(const LoadedConfiguration& L, const Degeneration& deg,
                                         const std::vector<int>& ks, const RunConfig& rc) {
    std::vector<LevelEmbedding> out;
    for (int k : ks) {
        out.push_back(LevelEmbedding::build(deg, L.fiber, k, mc_options(rc)));
    }
    return out;
}

std::string grid_csv(const RayGrid& g) {
    std::string out = "t,point,k,phi,envelope\n";
    char buf[160];
    for (std::size_t ki = 0; ki < g.k_set.size(); ++ki) {
        for (std::size_t ti = 0; ti < g.t_grid.size(); ++ti) {
            for (std::size_t x = 0; x < g.points.size(); ++x) {
                std::snprintf(buf, sizeof buf, "%.17g,%zu,%d,%.17g,%.17g\n", g.t_grid[ti], x, g.k_set[ki],
                              g.phi[ki][ti][x], g.envelope[ti][x]);
                out += buf;
            }
        }
    }
    return out;
}

json envelope_json(const RayGrid& g, const RunConfig& rc) {
    json attain = json::array();
    for (const auto& row : g.attaining_k) {
        attain.push_back(row);
    }
    return {{"k_set", g.k_set},
            {"e_k", g.e_k},
            {"c_k", g.c_k},
            {"eps_k", g.eps_k},
            {"monotone_boundary", g.monotone_boundary},
            {"boundary_continuity", g.boundary_continuity},
            {"boundary_continuity_shifted", g.boundary_continuity_shifted},
            {"boundary_tolerance", rc.tol_boundary},
            {"boundary_pass", g.boundary_continuity <= rc.tol_boundary},
            {"smallest_k_attains_near_zero", g.smallest_k_attains_near_zero},
            {"attaining_k", attain}};
}

json ray_json(const Degeneration& deg, const AsymptoticReport& rep, const std::vector<LevelEmbedding>& levels,
              const RayGrid& g, const RunConfig& rc) {
    json per_level = json::array();
    for (std::size_t ki = 0; ki < levels.size(); ++ki) {
        json rows = json::array();
        for (const auto& r : sup_osc_report(g, levels, ki)) {
            rows.push_back({{"t", r.t},
                            {"sup", r.sup},
                            {"inf", r.inf},
                            {"osc", r.osc},
                            {"sup_over_2t", r.sup_over_2t},
                            {"lower_bound", r.lower_bound},
                            {"upper_bound", r.upper_bound}});
        }
        per_level.push_back({{"k", levels[ki].k},
                             {"lambda_min_over_k", exact(deg.slice(levels[ki].k).lambda_min / Rational(levels[ki].k))},
                             {"gram_symmetry_residual", levels[ki].gram.symmetry_residual},
                             {"gram_consistent", levels[ki].gram.consistent},
                             {"sup_osc", rows}});
    }
    json comparisons = json::array();
    for (std::size_t ki = 0; ki + 1 < levels.size(); ++ki) {
        const RayComparison c = ray_comparison(deg, rep, levels[ki], levels[ki + 1], g.t_grid, g.points);
        comparisons.push_back({{"k", c.k},
                               {"l", c.l},
                               {"max_abs", c.max_abs},
                               {"max_near", c.max_near},
                               {"max_far", c.max_far},
                               {"ratio", c.ratio},
                               {"ratio_tolerance", rc.tol_ratio},
                               {"bounded", c.ratio <= rc.tol_ratio}});
    }
    return {{"levels", per_level}, {"comparisons", comparisons}};
}

json mass_json(const LoadedConfiguration& L, const Degeneration& deg, const AsymptoticReport& rep,
               const std::vector<int>& ks, const RunConfig& rc) {
    json rows = json::array();
    std::vector<double> kmass;
    bool nonnegative = true;
    for (int k : ks) {
        MCOptions opt = mc_options(rc);
        const LevelEmbedding level = LevelEmbedding::build(deg, L.fiber, k, opt);
        opt.seed = mix_seed(rc.seed, 1000 + static_cast<std::uint64_t>(k));
        const EnergyReport e = ma_mass(deg, rep, level, L.fiber, opt);
        rows.push_back({{"k", k},
                        {"edot_zero", e.edot_zero},
                        {"edot_zero_stderr", e.edot_zero_stderr},
                        {"mu", exact(e.mu)},
                        {"edot_minus_inf", exact(e.edot_minus_inf)},
                        {"mass", e.mass},
                        {"mass_stderr", e.mass_stderr},
                        {"mass_times_k", e.mass_times_k},
                        {"consistent", e.consistent}});
        kmass.push_back(e.mass_times_k);
        nonnegative = nonnegative && e.mass >= -5.0 * e.mass_stderr;
    }
    std::vector<double> sorted = kmass;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    const double top = sorted.back();
    return {{"rows", rows},
            {"mass_nonnegative", nonnegative},
            {"max_mass_times_k", top},
            {"median_mass_times_k", median},
            {"bounded", top <= 2.0 * std::abs(median)}};
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ValidationError("cannot write " + path.string());
    }
    f << content;
}

int dispatch(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const LoadedConfiguration L = load_configuration(rc.input);
    const Degeneration deg(L.config);
    const AsymptoticReport rep = fit_asymptotics(deg);

    json report = {{"schema", 1},
                   {"command", rc.command},
                   {"name", L.config.name},
                   {"variables", L.config.variables},
                   {"weights", L.config.eta.values()}};
    const bool numeric = rc.command == "n2" || rc.command == "ray" || rc.command == "mass" ||
                         rc.command == "envelope" || rc.command == "report" ||
                         (rc.command == "chow" && !L.fiber.empty());
    if (numeric) {
        report["seed"] = rc.seed;
        report["samples"] = rc.samples;
        report["workers"] = rc.workers;
        err << "seed " << rc.seed << ", " << rc.samples << " samples per component\n";
    }
    std::string csv;
    std::vector<std::string> failures;
    const bool all = rc.command == "report";

    if (rc.command == "flat-limit" || all) {
        report["flat_limit"] = flat_limit_json(L, deg, rep);
    }
    if (rc.command == "spectrum" || all) {
        report["spectrum"] = spectrum_json(L, deg, levels_or(rc, {1, 2, 3}));
    }
    if (rc.command == "futaki" || all) {
        report["futaki"] = futaki_json(deg, rep, rc.kmax > 0 ? rc.kmax : 30);
    }
    if (rc.command == "chow" || all) {
        report["chow"] = chow_json(deg, rep, rc.r);
        if (!L.fiber.empty()) {
            report["chow"]["numeric"] = chow_numeric_json(L, deg, rep, rc);
        }
    }
    if (rc.command == "n2" || (all && !L.cycle.empty())) {
        report["n2"] = n2_json(L, rep, rc);
    }
    if (rc.command == "ray" || rc.command == "envelope" || (all && !L.fiber.empty())) {
        need_fiber(L, rc.command);
        const std::vector<int> ks = levels_or(rc, {4, 8, 16});
        if (ks.size() < 3) {
            throw ValidationError("the envelope needs at least three levels in --k");
        }
        const std::vector<LevelEmbedding> levels = build_levels(L, deg, ks, rc);
        const RayGrid g = envelope(levels, parse_t_grid(rc.t_grid), L.points);
        report["t_grid"] = g.t_grid;
        if (rc.command != "envelope") {
            report["ray"] = ray_json(deg, rep, levels, g, rc);
        }
        if (rc.command != "ray") {
            report["envelope"] = envelope_json(g, rc);
            if (!g.monotone_boundary) {
                failures.push_back("no admissible shifts make phi(0;k) + c_k strictly decreasing");
            }
        }
        csv = grid_csv(g);
    }
    if (rc.command == "mass" || (all && !L.fiber.empty())) {
        need_fiber(L, "mass");
        std::vector<int> ks;
        const int top = rc.kmax > 0 ? rc.kmax : 12;
        for (int k = 2; k <= top; ++k) {
            ks.push_back(k);
        }
        report["mass"] = mass_json(L, deg, rep, levels_or(rc, ks), rc);
    }

    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!rc.out_dir.empty()) {
        write_file(rc.out_dir, rc.command + ".json", text);
        if (!csv.empty()) {
            write_file(rc.out_dir, rc.command + ".csv", csv);
        }
    }
    for (const auto& f : failures) {
        err << "numeric diagnostic failed: " << f << "\n";
    }
    return failures.empty() ? kExitOk : kExitNumeric;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and numeric invariants of test configurations"};
    RunConfig rc;
    const std::vector<std::string> commands{"flat-limit", "spectrum", "futaki", "chow", "n2",
                                            "ray",        "mass",     "envelope", "report"};
    app.add_option("command", rc.command, "Command to run")->required()->check(CLI::IsMember(commands));
    app.add_option("config", rc.input, "JSON configuration file")->required();
    app.add_option("--k", rc.k_list, "Comma-separated levels")->delimiter(',');
    app.add_option("--kmax", rc.kmax, "Largest level for futaki and mass");
    app.add_option("--r", rc.r, "Largest r for Chow weights")->check(CLI::Range(1, 40));
    app.add_option("--t-grid", rc.t_grid, "Geometric t grid min:max:steps")->capture_default_str();
    app.add_option("--samples", rc.samples, "Monte Carlo samples per cycle component")
        ->check(CLI::Range(std::size_t{16}, std::size_t{100000000}))
        ->capture_default_str();
    app.add_option("--seed", rc.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--workers", rc.workers, "Monte Carlo worker threads")->check(CLI::Range(1, 256));
    app.add_option("--out", rc.out_dir, "Directory for JSON and CSV output");
    app.add_option("--t-probe", rc.t_probe, "Flow time for the numeric Chow weight")->check(CLI::Range(-1e3, -1.0));
    app.add_option("--tol-sigma", rc.tol_sigma, "Monte Carlo acceptance in standard errors");
    app.add_option("--tol-boundary", rc.tol_boundary, "Envelope boundary continuity tolerance");
    app.add_option("--tol-ratio", rc.tol_ratio, "Ray comparison growth ratio tolerance");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }
    if (rc.kmax < 0 || rc.kmax > kMaxLevel) {
        err << "error: --kmax outside 1.." << kMaxLevel << "\n";
        return kExitValidation;
    }
    try {
        return dispatch(rc, out, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const UnstableHilbertData& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace kstab
