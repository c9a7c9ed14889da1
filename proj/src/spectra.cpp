#include "kstab/spectra.hpp"

#include "kstab/errors.hpp"

#include <algorithm>

namespace kstab {

void TestConfiguration::validate() const {
    if (variables.empty()) {
        throw ValidationError("configuration has no variables");
    }
    if (eta.size() != variables.size()) {
        throw ValidationError("weights have length " + std::to_string(eta.size()) + " but there are " +
                              std::to_string(variables.size()) + " variables");
    }
    if (ideal.nvars() != variables.size()) {
        throw ValidationError("ideal arity does not match the variable list");
    }
}

Degeneration::Degeneration(TestConfiguration config) : config_(std::move(config)) {
    config_.validate();
    basis_ = buchberger(config_.ideal, TermOrder(config_.eta));
    if (basis_.is_unit()) {
        throw ValidationError("ideal is the unit ideal; the scheme is empty");
    }
    initial_ = initial_ideal(basis_);
    const int krull = krull_dimension(initial_.leading, nvars());
    if (krull < 1) {
        throw ValidationError("ideal defines the empty projective scheme (Krull dimension 0)");
    }
    dimension_ = krull - 1;
}

GradedSlice make_slice(int k, std::vector<Monomial> monomials, const WeightVector& eta) {
    GradedSlice s;
    s.k = k;
    s.d_k = static_cast<long>(monomials.size());
    s.monomials = std::move(monomials);
    s.b_spectrum.reserve(s.monomials.size());
    Rational w(0);
    Rational sq(0);
    for (const auto& m : s.monomials) {
        const long b = monomial_weight(m, eta);
        s.b_spectrum.push_back(b);
        w += Rational(b);
        sq += Rational(b) * Rational(b);
    }
    s.w_k = w;
    s.sum_b_sq = sq;
    if (s.d_k == 0) {
        s.tr_a_sq = Rational(0);
        return s;
    }
    const Rational mean = w / Rational(s.d_k);
    s.tr_a_sq = sq - w * mean;
    s.a_spectrum.reserve(s.b_spectrum.size());
    for (long b : s.b_spectrum) {
        s.a_spectrum.push_back(Rational(b) - mean);
    }
    s.b_min = *std::min_element(s.b_spectrum.begin(), s.b_spectrum.end());
    for (long b : s.b_spectrum) {
        if (b > s.b_min && (!s.b_next || b < *s.b_next)) {
            s.b_next = b;
        }
    }
    s.lambda_min = Rational(s.b_min) - mean;
    if (s.b_next) {
        s.lambda_next = Rational(*s.b_next) - mean;
    }
    return s;
}

const GradedSlice& Degeneration::slice(int k) const {
    if (k < 0) {
        throw std::invalid_argument("slice degree must be non-negative");
    }
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(k);
        if (it != cache_.end()) {
            return it->second;
        }
    }
    GradedSlice s = make_slice(k, standard_monomials(initial_, k).monomials, config_.eta);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(k, std::move(s)).first->second;
}

GradedSlice graded_slice(const Degeneration& deg, int k) { return deg.slice(k); }

GradedSlice graded_slice(const TestConfiguration& config, int k) { return Degeneration(config).slice(k); }

}  // namespace kstab
