#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "levykf/linalg.hpp"

namespace levykf {

/// Counter-based, stream-splittable 64-bit generator.
///
/// Output i of stream (seed, stream_id) is a SplitMix64-style mix of
/// key + i·gamma, where key and the odd increment gamma are both hashed from
/// (seed, stream_id). A stream's sequence therefore depends only on its own
/// (seed, stream_id) pair and on how many values it has produced, never on
/// other streams. Satisfies UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform on the open interval (0, 1); never returns an endpoint.
    double uniform_open();
    double standard_normal();
    /// Exp(1).
    double standard_exponential();

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    /// Number of raw 64-bit values drawn so far.
    std::uint64_t position() const noexcept { return position_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t position_ = 0;
    std::uint64_t key_;
    std::uint64_t gamma_;
    std::normal_distribution<double> normal_;
};

/// Description of a zero-mean noise source.
///
///  - gaussian: multivariate normal with a PSD covariance, sampled as L·ξ with
///    L the semidefinite Cholesky factor and ξ i.i.d. standard normals;
///  - alpha_stable: `dim` independent symmetric α-stable components with
///    characteristic function exp(−σ^α |t|^α);
///  - sum: componentwise sum of independent draws from each part.
class NoiseSpec {
public:
    enum class Kind { gaussian, alpha_stable, sum };

    static NoiseSpec gaussian(Matrix covariance);
    static NoiseSpec alpha_stable(double alpha, double sigma, std::size_t dim = 1);
    static NoiseSpec sum(std::vector<NoiseSpec> parts);
    /// Degenerate source that always yields the zero vector.
    static NoiseSpec zero(std::size_t dim);

    Kind kind() const noexcept;
    std::size_t dim() const noexcept { return dim_; }

    // Accessors throw SpecificationError on the wrong kind.
    const Matrix& covariance() const;
    const Matrix& covariance_factor() const;
    double alpha() const;
    double sigma() const;
    std::span<const NoiseSpec> parts() const;

private:
    struct Gaussian {
        Matrix covariance;
        Matrix factor;
    };
    struct AlphaStable {
        double alpha;
        double sigma;
    };
    struct Sum {
        std::vector<NoiseSpec> parts;
    };

    NoiseSpec(std::size_t dim, std::variant<Gaussian, AlphaStable, Sum> body)
        : dim_(dim), body_(std::move(body)) {}

    std::size_t dim_;
    std::variant<Gaussian, AlphaStable, Sum> body_;
};

/// Throws SpecificationError unless 0 < alpha <= 2 and sigma > 0.
void validate_stable_parameters(double alpha, double sigma);

Vector sample_gaussian(const NoiseSpec& spec, RngStream& rng);

/// One draw from the symmetric α-stable law with scale sigma, using the
/// Chambers–Mallows–Stuck transform of a uniform angle and an Exp(1) variate.
double sample_alpha_stable(double alpha, double sigma, RngStream& rng);

Vector sample(const NoiseSpec& spec, RngStream& rng);

}  // namespace levykf
