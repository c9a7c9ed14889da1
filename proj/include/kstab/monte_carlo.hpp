#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace kstab {

using cdouble = std::complex<double>;

/// 64-bit Mersenne twister with portable uniform and Gaussian draws (the
/// standard distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::seed_seq& seq) : engine_(seq) {}

    /// Uniform on (0, 1].
    double uniform();
    /// Standard complex normal: E|g|^2 = 1.
    cdouble complex_normal();
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used to derive independent seeds per level or component.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// How chart points are drawn for importance sampling.
class SamplingLaw {
public:
    enum class Kind { FubiniStudy, Gaussian, ScaleMixture };

    /// u_i = g_i / g_0 for complex Gaussians g: the Fubini-Study law on the chart.
    static SamplingLaw fubini_study() { return SamplingLaw(Kind::FubiniStudy, 0); }
    /// Independent standard complex Gaussians per coordinate.
    static SamplingLaw gaussian() { return SamplingLaw(Kind::Gaussian, 0); }
    /// Fubini-Study draws rescaled by e^j, j uniform in [-half_width, half_width].
    static SamplingLaw scale_mixture(int half_width) { return SamplingLaw(Kind::ScaleMixture, half_width); }
    /// Scale mixture wide enough for a flow e^{t lambda} with the given eigenvalue spread.
    static SamplingLaw for_flow(double t, double spread);

    Kind kind() const { return kind_; }
    int half_width() const { return half_width_; }
    std::string name() const;

    void draw(Rng& rng, std::size_t d, cdouble* u) const;
    /// Density with respect to Lebesgue measure on C^d.
    double pdf(const cdouble* u, std::size_t d) const;

private:
    SamplingLaw(Kind kind, int half_width) : kind_(kind), half_width_(half_width) {}
    Kind kind_;
    int half_width_;
};

struct MCOptions {
    std::size_t samples = 100000;  // per cycle component
    std::uint64_t seed = 7;
    std::size_t batches = 16;
    std::size_t workers = 1;
    SamplingLaw law = SamplingLaw::fubini_study();
};

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    /// Estimate from the first quarter of the batches and its standard error.
    double quarter_value = 0.0;
    double quarter_stderr = 0.0;
    /// |value - quarter_value| <= 5 * quarter_stderr, up to rounding.
    bool consistent = true;
};

struct MCVectorEstimate {
    Eigen::VectorXd value;
    Eigen::VectorXd std_error;
    Eigen::VectorXd quarter_value;
    Eigen::VectorXd quarter_stderr;
    std::size_t samples = 0;
    bool consistent = true;

    MCEstimate component(Eigen::Index i) const;
};

/// Fills out[0..dim) with integrand times density at chart point u of the given
/// cycle component. The engine divides by the sampling pdf and the multiplicity
/// is applied by the engine.
using ChartIntegrand = std::function<void(std::size_t component, const cdouble* u, double* out)>;

struct ComponentSpec {
    std::size_t chart_dim = 1;
    int multiplicity = 1;
};

/// Batched, seeded importance-sampling estimate of the sum over components of
/// multiplicity * integral of the integrand. Batch results are reduced by a
/// pairwise tree so the value depends only on (seed, samples, batches).
/// Throws NumericError on a non-finite sample.
MCVectorEstimate mc_engine(const std::vector<ComponentSpec>& components, std::size_t dim,
                           const ChartIntegrand& integrand, const MCOptions& options);

}  // namespace kstab
