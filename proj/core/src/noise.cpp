#include "levykf/noise.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "levykf/errors.hpp"

namespace levykf {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Stafford "Mix13" finalizer, as used by SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Odd increment with enough bit transitions, after SplittableRandom.
constexpr std::uint64_t mix_gamma(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    z = (z ^ (z >> 33)) | 1ULL;
    const auto transitions = std::popcount(z ^ (z >> 1));
    return transitions < 24 ? z ^ 0xaaaaaaaaaaaaaaaaULL : z;
}

}  // namespace

// ---------------------------------------------------------------------------
// RngStream

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      key_(mix64(seed ^ mix64(stream_id + kGolden))),
      gamma_(mix_gamma(mix64(stream_id ^ 0x6a09e667f3bcc909ULL) + seed)) {}

RngStream::result_type RngStream::operator()() {
    ++position_;
    return mix64(key_ + position_ * gamma_);
}

double RngStream::uniform_open() {
    // 53 random bits, centred in their cell: (j + 0.5) / 2^53.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::standard_normal() { return normal_(*this); }

double RngStream::standard_exponential() { return -std::log(uniform_open()); }

// ---------------------------------------------------------------------------
// NoiseSpec

void validate_stable_parameters(double alpha, double sigma) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw SpecificationError("alpha-stable noise: alpha must lie in (0, 2], got " +
                                 std::to_string(alpha));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw SpecificationError("alpha-stable noise: sigma must be positive, got " +
                                 std::to_string(sigma));
    }
}

NoiseSpec NoiseSpec::gaussian(Matrix covariance) {
    if (!covariance.is_square() || covariance.rows() == 0) {
        throw SpecificationError("gaussian noise: covariance must be a non-empty square matrix, got " +
                                 covariance.shape());
    }
    Matrix factor = psd_factor(covariance);
    const std::size_t dim = covariance.rows();
    return NoiseSpec(dim, Gaussian{std::move(covariance), std::move(factor)});
}

NoiseSpec NoiseSpec::alpha_stable(double alpha, double sigma, std::size_t dim) {
    validate_stable_parameters(alpha, sigma);
    if (dim == 0) throw SpecificationError("alpha-stable noise: dimension must be positive");
    return NoiseSpec(dim, AlphaStable{alpha, sigma});
}

NoiseSpec NoiseSpec::sum(std::vector<NoiseSpec> parts) {
    if (parts.empty()) throw SpecificationError("sum noise: needs at least one part");
    const std::size_t dim = parts.front().dim();
    for (const auto& p : parts) {
        if (p.dim() != dim) {
            throw DimensionError("sum noise: parts have dimensions " + std::to_string(dim) +
                                 " and " + std::to_string(p.dim()));
        }
    }
    return NoiseSpec(dim, Sum{std::move(parts)});
}

NoiseSpec NoiseSpec::zero(std::size_t dim) { return gaussian(Matrix::zeros(dim, dim)); }

NoiseSpec::Kind NoiseSpec::kind() const noexcept {
    switch (body_.index()) {
        case 0: return Kind::gaussian;
        case 1: return Kind::alpha_stable;
        default: return Kind::sum;
    }
}

const Matrix& NoiseSpec::covariance() const {
    if (const auto* g = std::get_if<Gaussian>(&body_)) return g->covariance;
    throw SpecificationError("NoiseSpec: covariance requested from a non-gaussian spec");
}

const Matrix& NoiseSpec::covariance_factor() const {
    if (const auto* g = std::get_if<Gaussian>(&body_)) return g->factor;
    throw SpecificationError("NoiseSpec: covariance factor requested from a non-gaussian spec");
}

double NoiseSpec::alpha() const {
    if (const auto* s = std::get_if<AlphaStable>(&body_)) return s->alpha;
    throw SpecificationError("NoiseSpec: alpha requested from a non-stable spec");
}

double NoiseSpec::sigma() const {
    if (const auto* s = std::get_if<AlphaStable>(&body_)) return s->sigma;
    throw SpecificationError("NoiseSpec: sigma requested from a non-stable spec");
}

std::span<const NoiseSpec> NoiseSpec::parts() const {
    if (const auto* s = std::get_if<Sum>(&body_)) return s->parts;
    throw SpecificationError("NoiseSpec: parts requested from a non-sum spec");
}

// ---------------------------------------------------------------------------
// Sampling

Vector sample_gaussian(const NoiseSpec& spec, RngStream& rng) {
    if (spec.kind() != NoiseSpec::Kind::gaussian) {
        throw SpecificationError("sample_gaussian: spec is not gaussian");
    }
    const Matrix& l = spec.covariance_factor();
    Vector xi(spec.dim());
    for (std::size_t i = 0; i < xi.dim(); ++i) xi[i] = rng.standard_normal();
    return mat_vec(l, xi);
}

double sample_alpha_stable(double alpha, double sigma, RngStream& rng) {
    validate_stable_parameters(alpha, sigma);
    const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
    const double w = rng.standard_exponential();
    if (alpha == 1.0) return sigma * std::tan(v);
    const double x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
    return sigma * x;
}

Vector sample(const NoiseSpec& spec, RngStream& rng) {
    switch (spec.kind()) {
        case NoiseSpec::Kind::gaussian:
            return sample_gaussian(spec, rng);
        case NoiseSpec::Kind::alpha_stable: {
            Vector out(spec.dim());
            for (std::size_t i = 0; i < out.dim(); ++i)
                out[i] = sample_alpha_stable(spec.alpha(), spec.sigma(), rng);
            return out;
        }
        case NoiseSpec::Kind::sum: {
            Vector out(spec.dim());
            for (const auto& part : spec.parts()) out = vec_add(out, sample(part, rng));
            return out;
        }
    }
    return Vector(spec.dim());
}

}  // namespace levykf
