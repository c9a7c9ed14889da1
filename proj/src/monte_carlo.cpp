#include "kstab/monte_carlo.hpp"

#include "kstab/errors.hpp"

#include <cmath>
#include <sstream>
#include <thread>

namespace kstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double factorial_d(std::size_t n) {
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i) {
        f *= static_cast<double>(i);
    }
    return f;
}

double fs_pdf(const cdouble* u, std::size_t d) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        r2 += std::norm(u[i]);
    }
    return factorial_d(d) / std::pow(kPi, static_cast<double>(d)) * std::pow(1.0 + r2, -static_cast<double>(d + 1));
}

struct Sums {
    Eigen::VectorXd s1;
    Eigen::VectorXd s2;
    std::size_t n = 0;
};

Sums tree_sum(const std::vector<Sums>& parts, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) {
        return parts[lo];
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    Sums a = tree_sum(parts, lo, mid);
    const Sums b = tree_sum(parts, mid, hi);
    a.s1 += b.s1;
    a.s2 += b.s2;
    a.n += b.n;
    return a;
}

void mean_and_error(const Sums& s, Eigen::VectorXd& mean, Eigen::VectorXd& var_of_mean) {
    const double n = static_cast<double>(s.n);
    mean = s.s1 / n;
    if (s.n < 2) {
        var_of_mean = Eigen::VectorXd::Zero(s.s1.size());
        return;
    }
    var_of_mean = ((s.s2.array() - s.s1.array().square() / n) / (n * (n - 1.0))).max(0.0).matrix();
}

// Zero-variance integrands differ from their quarter estimate only by rounding.
bool quarter_agrees(double full, double quarter, double quarter_stderr) {
    return std::abs(full - quarter) <= 5.0 * quarter_stderr + 1e-12 * std::max(1.0, std::abs(full));
}

}  // namespace

double Rng::uniform() { return 1.0 - static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

cdouble Rng::complex_normal() {
    const double r = std::sqrt(-std::log(uniform()));
    const double theta = 2.0 * kPi * uniform();
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SamplingLaw SamplingLaw::for_flow(double t, double spread) {
    const double width = std::abs(t) * spread;
    if (width <= 1.0) {
        return fubini_study();
    }
    return scale_mixture(static_cast<int>(std::ceil(width)) + 2);
}

std::string SamplingLaw::name() const {
    switch (kind_) {
        case Kind::FubiniStudy:
            return "fubini-study";
        case Kind::Gaussian:
            return "gaussian";
        case Kind::ScaleMixture:
            return "scale-mixture(" + std::to_string(half_width_) + ")";
    }
    return "unknown";
}

void SamplingLaw::draw(Rng& rng, std::size_t d, cdouble* u) const {
    if (kind_ == Kind::Gaussian) {
        for (std::size_t i = 0; i < d; ++i) {
            u[i] = rng.complex_normal();
        }
        return;
    }
    double scale = 1.0;
    if (kind_ == Kind::ScaleMixture) {
        const auto span = static_cast<std::uint64_t>(2 * half_width_ + 1);
        const auto j = static_cast<long>(rng.next() % span) - half_width_;
        scale = std::exp(static_cast<double>(j));
    }
    const cdouble g0 = rng.complex_normal();
    for (std::size_t i = 0; i < d; ++i) {
        u[i] = scale * rng.complex_normal() / g0;
    }
}

double SamplingLaw::pdf(const cdouble* u, std::size_t d) const {
    switch (kind_) {
        case Kind::Gaussian: {
            double r2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                r2 += std::norm(u[i]);
            }
            return std::exp(-r2) / std::pow(kPi, static_cast<double>(d));
        }
        case Kind::FubiniStudy:
            return fs_pdf(u, d);
        case Kind::ScaleMixture: {
            double r2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                r2 += std::norm(u[i]);
            }
            const double c = factorial_d(d) / std::pow(kPi, static_cast<double>(d));
            const double dd = static_cast<double>(d);
            double total = 0.0;
            for (int j = -half_width_; j <= half_width_; ++j) {
                const double inv_s2 = std::exp(-2.0 * static_cast<double>(j));
                total += c * std::pow(1.0 + r2 * inv_s2, -(dd + 1.0)) * std::pow(inv_s2, dd);
            }
            return total / static_cast<double>(2 * half_width_ + 1);
        }
    }
    return 0.0;
}

MCEstimate MCVectorEstimate::component(Eigen::Index i) const {
    MCEstimate e;
    e.value = value(i);
    e.std_error = std_error(i);
    e.samples = samples;
    e.quarter_value = quarter_value(i);
    e.quarter_stderr = quarter_stderr(i);
    e.consistent = quarter_agrees(e.value, e.quarter_value, e.quarter_stderr);
    return e;
}

MCVectorEstimate mc_engine(const std::vector<ComponentSpec>& components, std::size_t dim,
                           const ChartIntegrand& integrand, const MCOptions& options) {
    if (options.samples < 1) {
        throw std::invalid_argument("mc_engine: at least one sample is required");
    }
    const std::size_t batches = std::max<std::size_t>(1, std::min(options.batches, options.samples));
    const std::size_t ncomp = components.size();
    const auto edim = static_cast<Eigen::Index>(dim);
    std::vector<std::vector<Sums>> results(ncomp, std::vector<Sums>(batches));

    auto run_batch = [&](std::size_t c, std::size_t b) {
        const ComponentSpec& spec = components[c];
        const std::size_t count = options.samples / batches + (b < options.samples % batches ? 1 : 0);
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed & 0xffffffffULL),
                          static_cast<std::uint32_t>(options.seed >> 32), static_cast<std::uint32_t>(c),
                          static_cast<std::uint32_t>(b)};
        Rng rng(seq);
        Sums s{Eigen::VectorXd::Zero(edim), Eigen::VectorXd::Zero(edim), count};
        std::vector<cdouble> u(spec.chart_dim);
        Eigen::VectorXd out(edim);
        for (std::size_t i = 0; i < count; ++i) {
            options.law.draw(rng, spec.chart_dim, u.data());
            const double p = options.law.pdf(u.data(), spec.chart_dim);
            out.setZero();
            integrand(c, u.data(), out.data());
            out *= static_cast<double>(spec.multiplicity) / p;
            if (!out.allFinite()) {
                std::ostringstream msg;
                msg << "non-finite Monte Carlo sample (component " << c << ", batch " << b << ", sample " << i
                    << ", u =";
                for (const auto& v : u) {
                    msg << " " << v;
                }
                msg << ")";
                throw NumericError(msg.str());
            }
            s.s1 += out;
            s.s2 += out.cwiseProduct(out);
        }
        results[c][b] = std::move(s);
    };

    const std::size_t jobs = ncomp * batches;
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, jobs));
    if (workers == 1) {
        for (std::size_t j = 0; j < jobs; ++j) {
            run_batch(j / batches, j % batches);
        }
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t j = w; j < jobs; j += workers) {
                        run_batch(j / batches, j % batches);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    MCVectorEstimate est;
    est.value = Eigen::VectorXd::Zero(edim);
    Eigen::VectorXd var = Eigen::VectorXd::Zero(edim);
    est.quarter_value = Eigen::VectorXd::Zero(edim);
    Eigen::VectorXd qvar = Eigen::VectorXd::Zero(edim);
    const std::size_t quarter = std::max<std::size_t>(1, batches / 4);
    for (std::size_t c = 0; c < ncomp; ++c) {
        Eigen::VectorXd mean, v;
        const Sums all = tree_sum(results[c], 0, batches);
        mean_and_error(all, mean, v);
        est.value += mean;
        var += v;
        const Sums part = tree_sum(results[c], 0, quarter);
        mean_and_error(part, mean, v);
        est.quarter_value += mean;
        qvar += v;
        est.samples += all.n;
    }
    est.std_error = var.cwiseSqrt();
    est.quarter_stderr = qvar.cwiseSqrt();
    for (Eigen::Index i = 0; i < edim; ++i) {
        est.consistent = est.consistent && quarter_agrees(est.value(i), est.quarter_value(i), est.quarter_stderr(i));
    }
    return est;
}

}  // namespace kstab
