#include "kstab/asymptotics.hpp"

#include "kstab/errors.hpp"

#include <algorithm>
#include <string>

namespace kstab {

namespace {

struct Slope {
    Rational value;
    bool exact = false;
};

// Slope of a sequence that should be eventually linear in k. `exact` is false
// when the validation degrees disagree; value is then k_hi's ratio.
Slope linear_slope(const std::vector<std::pair<int, long>>& samples) {
    const auto& [k0, v0] = samples.front();
    const long step = samples[1].second - v0;
    bool linear = true;
    for (const auto& [k, v] : samples) {
        if (v != v0 + step * (k - k0)) {
            linear = false;
            break;
        }
    }
    if (linear) {
        return {Rational(step), true};
    }
    const auto& [kl, vl] = samples.back();
    return {Rational(vl) / Rational(kl), false};
}

}  // namespace

AsymptoticReport fit_asymptotics(const Degeneration& deg, int k_start) {
    if (k_start < 1) {
        throw std::invalid_argument("fit_asymptotics: k_start must be at least 1");
    }
    const int n = deg.dimension();
    const int points = n + 3;  // enough for the degree n+2 square sum
    const int validation = n + 3;
    for (int k0 = k_start; k0 + points + validation - 1 <= kMaxStableDegree; ++k0) {
        std::vector<Rational> d, w, sq;
        for (int k = k0; k < k0 + points; ++k) {
            const GradedSlice& s = deg.slice(k);
            d.push_back(Rational(s.d_k));
            w.push_back(s.w_k);
            sq.push_back(s.sum_b_sq);
        }
        const UniPoly hilbert = interpolate_consecutive(k0, {d.begin(), d.begin() + n + 1});
        const UniPoly weight = interpolate_consecutive(k0, {w.begin(), w.begin() + n + 2});
        const UniPoly sum_sq = interpolate_consecutive(k0, sq);
        if (hilbert.degree() != n) {
            continue;
        }
        const int k_end = k0 + points + validation - 1;
        bool ok = true;
        for (int k = k0; k <= k_end && ok; ++k) {
            const GradedSlice& s = deg.slice(k);
            const Rational kk(k);
            ok = hilbert(kk) == Rational(s.d_k) && weight(kk) == s.w_k && sum_sq(kk) == s.sum_b_sq;
        }
        if (!ok) {
            continue;
        }

        AsymptoticReport rep;
        rep.n = n;
        rep.hilbert_poly = hilbert;
        rep.weight_poly = weight;
        rep.sum_sq_poly = sum_sq;
        rep.stability_window = {k0, k0 + points - 1};
        rep.validated_through = k_end;
        const Rational a_n = hilbert.coefficient(n);
        const Rational a_n1 = hilbert.coefficient(n - 1);
        const Rational b_top = weight.coefficient(n + 1);
        const Rational b_next = weight.coefficient(n);
        rep.F0 = b_top / a_n;
        rep.F1 = (b_next * a_n - b_top * a_n1) / (a_n * a_n);
        rep.n2_sq = sum_sq.coefficient(n + 2) - b_top * b_top / a_n;
        rep.trivial_action = rep.n2_sq.is_zero();

        std::vector<std::pair<int, long>> mins, nexts;
        bool next_everywhere = true;
        for (int k = k0; k <= k_end; ++k) {
            const GradedSlice& s = deg.slice(k);
            mins.emplace_back(k, s.b_min);
            if (s.b_next) {
                nexts.emplace_back(k, *s.b_next);
            } else {
                next_everywhere = false;
            }
        }
        const Slope lam = linear_slope(mins);
        rep.Lambda_exact = lam.exact;
        rep.Lambda = lam.exact ? lam.value - rep.F0 : deg.slice(k_end).lambda_min / Rational(k_end);
        if (next_everywhere && nexts.size() >= 2) {
            const Slope gam = linear_slope(nexts);
            rep.Gamma_exact = gam.exact;
            rep.Gamma = gam.exact ? gam.value - rep.F0 : *deg.slice(k_end).lambda_next / Rational(k_end);
        }
        return rep;
    }
    throw UnstableHilbertData("no stable interpolation window for degrees up to " +
                              std::to_string(kMaxStableDegree) + " (is the ideal saturated?)");
}

Rational futaki_f(const Degeneration& deg, const AsymptoticReport& report, int k) {
    if (k < 1) {
        throw std::invalid_argument("futaki_f: k must be at least 1");
    }
    const GradedSlice& s = deg.slice(k);
    return s.w_k / (Rational(k) * Rational(s.d_k)) - report.F0;
}

OperatorNormReport operator_norm_check(const Degeneration& deg, const AsymptoticReport& report, int k_max) {
    if (k_max < 1) {
        throw std::invalid_argument("operator_norm_check: k_max must be at least 1");
    }
    OperatorNormReport out;
    out.C_star = Rational(0);
    for (int k = 1; k <= k_max; ++k) {
        const GradedSlice& s = deg.slice(k);
        for (const auto& a : s.a_spectrum) {
            out.C_star = std::max(out.C_star, a.abs() / Rational(k));
        }
    }
    out.budget = Rational(deg.config().eta.max_abs()) + report.F0.abs() + Rational(1);
    out.pass = out.C_star <= out.budget;
    return out;
}

ChowReport chow_weight_algebraic(const Degeneration& deg, const AsymptoticReport& report, int r) {
    if (r < 1) {
        throw std::invalid_argument("chow_weight_algebraic: r must be at least 1");
    }
    const int n = report.n;
    const GradedSlice& base = deg.slice(r);
    const Rational d_r(base.d_k);
    const Rational w_r = base.w_k;
    auto tilde = [&](int p) {
        const GradedSlice& s = deg.slice(r * p);
        return s.w_k * Rational(r) * d_r - w_r * Rational(r * p) * Rational(s.d_k);
    };
    const int points = n + 2;
    const int validation = n + 3;
    const int k_lo = report.stability_window.first;
    for (int p0 = std::max(1, (k_lo + r - 1) / r); p0 <= kMaxStableDegree; ++p0) {
        std::vector<Rational> vals;
        for (int p = p0; p < p0 + points; ++p) {
            vals.push_back(tilde(p));
        }
        UniPoly poly = interpolate_consecutive(p0, vals);
        bool ok = true;
        for (int p = p0 + points; p < p0 + points + validation && ok; ++p) {
            ok = poly(Rational(p)) == tilde(p);
        }
        if (!ok) {
            continue;
        }
        ChowReport rep;
        rep.r = r;
        rep.tilde_w = poly;
        rep.p_window = {p0, p0 + points + validation - 1};
        const Rational fact = factorial(static_cast<unsigned>(n + 1));
        rep.mu = fact * poly.coefficient(n + 1) / (Rational(r) * d_r);
        const Rational a_n = report.hilbert_poly.coefficient(n);
        rep.c_X_omega = a_n / fact;
        const Rational scaled = rep.c_X_omega * rep.mu / Rational(r).pow(static_cast<unsigned>(n));
        rep.futaki_residual = -scaled - report.F1;
        rep.normalized_residual = -scaled / (a_n * a_n) - report.F1;
        return rep;
    }
    throw UnstableHilbertData("weight polynomial in p did not stabilize for r = " + std::to_string(r));
}

}  // namespace kstab
