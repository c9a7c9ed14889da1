#pragma once

#include "kstab/groebner.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace kstab {

/// Homogeneous ideal plus integer weights on the ambient coordinates.
struct TestConfiguration {
    std::string name;
    std::vector<std::string> variables;
    WeightVector eta;
    Ideal ideal;

    /// Checks weight length and that S/I is not the unit ideal nor zero-dimensional.
    /// Throws ValidationError.
    void validate() const;
};

struct GradedSlice {
    int k = 0;
    long d_k = 0;
    Rational w_k;
    std::vector<Monomial> monomials;    // standard monomials, same order as b_spectrum
    std::vector<long> b_spectrum;       // p.eta per standard monomial
    std::vector<Rational> a_spectrum;   // b - w_k/d_k
    Rational sum_b_sq;
    Rational tr_a_sq;
    Rational lambda_min;
    std::optional<Rational> lambda_next;
    long b_min = 0;
    std::optional<long> b_next;
};

/// A validated configuration with its Groebner basis and flat limit cached.
/// Slices are memoized; safe to query from several threads.
class Degeneration {
public:
    explicit Degeneration(TestConfiguration config);

    const TestConfiguration& config() const { return config_; }
    const GroebnerBasis& basis() const { return basis_; }
    const InitialIdeal& initial() const { return initial_; }
    /// Dimension n of X (Krull dimension of S/I minus one).
    int dimension() const { return dimension_; }
    std::size_t nvars() const { return config_.variables.size(); }

    const GradedSlice& slice(int k) const;

private:
    TestConfiguration config_;
    GroebnerBasis basis_;
    InitialIdeal initial_;
    int dimension_ = 0;
    mutable std::mutex mutex_;
    mutable std::map<int, GradedSlice> cache_;
};

GradedSlice graded_slice(const Degeneration& deg, int k);
GradedSlice graded_slice(const TestConfiguration& config, int k);

/// Builds the slice directly from a list of standard monomials and weights.
GradedSlice make_slice(int k, std::vector<Monomial> monomials, const WeightVector& eta);

}  // namespace kstab
