#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "levykf/linalg.hpp"
#include "levykf/noise.hpp"

namespace levykf {

/// A matrix that is either constant or given per step. A sequence of one
/// element is constant; a longer sequence must cover every step it is
/// queried at.
class StepSequence {
public:
    StepSequence() = default;
    /// Constant.
    StepSequence(Matrix m);  // NOLINT(google-explicit-constructor)
    explicit StepSequence(std::vector<Matrix> per_step);

    const Matrix& at(std::size_t k) const;
    bool is_constant() const noexcept { return items_.size() == 1; }
    std::size_t length() const noexcept { return items_.size(); }
    std::span<const Matrix> items() const noexcept { return items_; }

private:
    std::vector<Matrix> items_;
};

/// Linear state-space system
///
///     x_{k+1} = F_k x_k + w_k,   w_k ~ N(0, Q_k)
///     z_k     = H_k x_k + v_k,   v_k ~ measurement_noise
///
/// with true initial state x0. Construction validates every shape and that
/// each Q_k is symmetric PSD.
class StateSpaceModel {
public:
    StateSpaceModel(StepSequence transition, StepSequence observation,
                    StepSequence process_covariance, NoiseSpec measurement_noise, Vector x0);

    std::size_t state_dim() const noexcept { return n_; }
    std::size_t obs_dim() const noexcept { return m_; }

    const Matrix& F(std::size_t k) const { return transition_.at(k); }
    const Matrix& H(std::size_t k) const { return observation_.at(k); }
    const Matrix& Q(std::size_t k) const;
    /// Gaussian spec for w_k (factor cached at construction).
    const NoiseSpec& process_noise(std::size_t k) const;
    const NoiseSpec& measurement_noise() const noexcept { return measurement_noise_; }
    const Vector& x0() const noexcept { return x0_; }

    const StepSequence& transition() const noexcept { return transition_; }
    const StepSequence& observation() const noexcept { return observation_; }
    const StepSequence& process_covariance() const noexcept { return process_covariance_; }

    /// Longest per-step sequence among F, H, Q (1 when all are constant).
    std::size_t horizon() const noexcept;

    /// Copy with a different measurement noise source.
    StateSpaceModel with_measurement_noise(NoiseSpec noise) const;
    /// Copy with a different process covariance.
    StateSpaceModel with_process_covariance(StepSequence q) const;

private:
    std::size_t n_;
    std::size_t m_;
    StepSequence transition_;
    StepSequence observation_;
    StepSequence process_covariance_;
    std::vector<NoiseSpec> process_noise_;
    NoiseSpec measurement_noise_;
    Vector x0_;
};

struct StepRecord {
    std::size_t k = 0;
    Vector x_true;
    Vector z;
    std::optional<Vector> x_prior;
    std::optional<Vector> x_post;
    /// Per observation component; all false for the conventional filter.
    std::vector<bool> clipped;
};

struct RunRecord {
    std::vector<StepRecord> steps;

    std::size_t size() const noexcept { return steps.size(); }
    bool filtered() const noexcept;
};

/// Ground truth and observations for k = 0..num_steps-1. Process noise w_k
/// is drawn from `state_rng` when producing x_{k+1}; measurement noise v_k
/// from `obs_rng` when producing z_k (z_0 included).
RunRecord simulate(const StateSpaceModel& model, std::size_t num_steps, RngStream& state_rng,
                   RngStream& obs_rng);

inline constexpr std::size_t kDefaultNumSteps = 100;

/// Parameters of the plane-tracking preset.
struct TrackingParameters {
    double stable_alpha = 1.3;
    double stable_sigma = 10.0;
    double gaussian_variance = 5.0;
    double process_variance = 1.0;
};

/// Constant-velocity particle in the plane: state (x¹, x², u¹, u²), noisy
/// position observations. Each observation component carries independent
/// symmetric α-stable noise plus independent Gaussian noise.
StateSpaceModel tracking_preset(const TrackingParameters& params = {});

}  // namespace levykf
