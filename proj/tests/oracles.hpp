#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the Groebner or spectra code paths.

#include "kstab/polynomial.hpp"
#include "kstab/rational.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

using kstab::Monomial;
using kstab::Polynomial;
using kstab::Rational;

/// Rank of a rational matrix by fraction-exact Gaussian elimination.
inline std::size_t rank(std::vector<std::vector<Rational>> rows) {
    std::size_t r = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][c].is_zero()) {
            ++pivot;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[pivot]);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c].is_zero()) {
                continue;
            }
            const Rational f = rows[i][c] / rows[r][c];
            for (std::size_t j = c; j < cols; ++j) {
                rows[i][j] -= f * rows[r][j];
            }
        }
        ++r;
    }
    return r;
}

/// Every exponent vector of total degree k, by plain recursion.
inline std::vector<Monomial> all_monomials(std::size_t nvars, int k) {
    std::vector<Monomial> out;
    std::vector<int> e(nvars, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
        if (pos + 1 == nvars) {
            e[pos] = left;
            out.emplace_back(e);
            return;
        }
        for (int a = 0; a <= left; ++a) {
            e[pos] = a;
            rec(pos + 1, left - a);
        }
    };
    if (nvars > 0 && k >= 0) {
        rec(0, k);
    }
    return out;
}

/// dim (S/I)_k from the rank of the degree-k multiples of the generators.
inline long quotient_dimension(const std::vector<Polynomial>& gens, std::size_t nvars, int k) {
    const auto basis = all_monomials(nvars, k);
    std::map<Monomial, std::size_t> column;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        column[basis[i]] = i;
    }
    std::vector<std::vector<Rational>> rows;
    for (const auto& g : gens) {
        const int dg = g.degree();
        if (dg > k || g.is_zero()) {
            continue;
        }
        for (const auto& m : all_monomials(nvars, k - dg)) {
            std::vector<Rational> row(basis.size(), Rational(0));
            for (const auto& [gm, c] : g.terms()) {
                row[column.at(gm * m)] = c;
            }
            rows.push_back(std::move(row));
        }
    }
    return static_cast<long>(basis.size() - rank(std::move(rows)));
}

/// Coefficients (ascending) of the polynomial through (xs[i], ys[i]), by Lagrange's formula.
inline std::vector<Rational> lagrange_coefficients(const std::vector<long>& xs, const std::vector<Rational>& ys) {
    const std::size_t n = xs.size();
    std::vector<Rational> out(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rational> basis{Rational(1)};
        Rational denom(1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            std::vector<Rational> next(basis.size() + 1, Rational(0));
            for (std::size_t d = 0; d < basis.size(); ++d) {
                next[d + 1] += basis[d];
                next[d] -= basis[d] * Rational(xs[j]);
            }
            basis = std::move(next);
            denom *= Rational(xs[i] - xs[j]);
        }
        for (std::size_t d = 0; d < basis.size(); ++d) {
            out[d] += ys[i] * basis[d] / denom;
        }
    }
    while (out.size() > 1 && out.back().is_zero()) {
        out.pop_back();
    }
    return out;
}

/// Gauss-Legendre nodes and weights on [a, b].
inline void gauss_legendre(int npts, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(npts), 0.0);
    w.assign(static_cast<std::size_t>(npts), 0.0);
    for (int i = 0; i < npts; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= npts; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = npts * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) {
                break;
            }
        }
        x[static_cast<std::size_t>(i)] = 0.5 * (a + b) - 0.5 * (b - a) * z;
        w[static_cast<std::size_t>(i)] = (b - a) / ((1.0 - z * z) * dp * dp);
    }
}

/// Integral of f over [0, 1] by composite Gauss-Legendre on `pieces` panels.
inline double integrate_unit(const std::function<double(double)>& f, int pieces = 64, int npts = 20) {
    double total = 0.0;
    for (int p = 0; p < pieces; ++p) {
        std::vector<double> x, w;
        gauss_legendre(npts, static_cast<double>(p) / pieces, static_cast<double>(p + 1) / pieces, x, w);
        for (std::size_t i = 0; i < x.size(); ++i) {
            total += w[i] * f(x[i]);
        }
    }
    return total;
}

}  // namespace oracle
