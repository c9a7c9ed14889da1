#include "kstab/univariate.hpp"

#include <stdexcept>

namespace kstab {

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void UniPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) {
        coeffs_.pop_back();
    }
}

Rational UniPoly::coefficient(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) {
        return Rational(0);
    }
    return coeffs_[static_cast<std::size_t>(i)];
}

Rational UniPoly::leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }

Rational UniPoly::operator()(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

std::string UniPoly::to_string(const std::string& var) const {
    if (coeffs_.empty()) {
        return "0";
    }
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = coeffs_[static_cast<std::size_t>(i)];
        if (c.is_zero()) {
            continue;
        }
        if (!out.empty()) {
            out += c.sign() < 0 ? " - " : " + ";
        } else if (c.sign() < 0) {
            out += "-";
        }
        const Rational mag = c.abs();
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (mono.empty()) {
            out += mag.to_string();
        } else if (mag == Rational(1)) {
            out += mono;
        } else {
            out += mag.to_string() + "*" + mono;
        }
    }
    return out;
}

UniPoly interpolate_consecutive(long x0, const std::vector<Rational>& values) {
    if (values.empty()) {
        return UniPoly();
    }
    // Newton forward differences, then expand the falling-factorial basis.
    const std::size_t m = values.size();
    std::vector<Rational> diff(values);
    std::vector<Rational> newton;
    newton.reserve(m);
    for (std::size_t order = 0; order < m; ++order) {
        newton.push_back(diff[0]);
        for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
            diff[i] = diff[i + 1] - diff[i];
        }
        diff.pop_back();
    }
    // sum_j newton[j] * C(x - x0, j) = sum_j newton[j]/j! * prod_{i<j} (x - x0 - i)
    std::vector<Rational> result(m, Rational(0));
    std::vector<Rational> basis{Rational(1)};  // prod_{i<j} (x - x0 - i)
    Rational fact(1);
    for (std::size_t j = 0; j < m; ++j) {
        if (j > 0) {
            fact *= Rational(static_cast<long>(j));
        }
        const Rational scale = newton[j] / fact;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            result[i] += scale * basis[i];
        }
        // basis *= (x - (x0 + j))
        const Rational root(x0 + static_cast<long>(j));
        std::vector<Rational> next(basis.size() + 1, Rational(0));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            next[i + 1] += basis[i];
            next[i] -= root * basis[i];
        }
        basis = std::move(next);
    }
    return UniPoly(std::move(result));
}

}  // namespace kstab
