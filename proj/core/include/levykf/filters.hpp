#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "levykf/linalg.hpp"
#include "levykf/model.hpp"

namespace levykf {

/// Belief of one filter at step k. After kf_init or a predict only the prior
/// fields are set; an update fills the posterior.
struct FilterState {
    std::size_t k = 0;
    Vector x_prior;
    Matrix P_prior;
    std::optional<Vector> x_post;
    std::optional<Matrix> P_post;
    std::optional<Matrix> last_gain;
    /// z − H x̄ (conventional) or z̃ − H x̄ (modified) of the last update.
    std::optional<Vector> last_innovation;
    std::vector<bool> last_clipped;

    bool has_posterior() const noexcept { return x_post.has_value() && P_post.has_value(); }
};

inline constexpr double kDefaultClipThreshold = 40.0;

class ModifiedFilterConfig {
public:
    /// Throws SpecificationError unless clip_threshold > 0.
    explicit ModifiedFilterConfig(double clip_threshold = kDefaultClipThreshold);

    double clip_threshold() const noexcept { return clip_threshold_; }

private:
    double clip_threshold_;
};

struct ClipResult {
    Vector z_clipped;
    std::vector<bool> clipped_mask;
};

struct ConventionalVariant {
    Matrix R;
};

struct ModifiedVariant {
    ModifiedFilterConfig config;
};

using FilterVariant = std::variant<ConventionalVariant, ModifiedVariant>;

/// Prior at step 0. Throws SpecificationError when P0 is not symmetric PSD
/// or does not match x0_est.
FilterState kf_init(const Vector& x0_est, const Matrix& P0);

/// Minimum-norm state consistent with an observation, Hᵀ(HHᵀ)⁻¹z. For a
/// selector H this copies the observed components and zeroes the rest.
Vector initial_estimate_from_observation(const Matrix& H, const Vector& z);

/// Conventional measurement update with known covariance R:
///   K = P̄Hᵀ(HP̄Hᵀ + R)⁻¹,  x̂ = x̄ + K(z − Hx̄),  P = (I − KH)P̄.
FilterState kf_update(const FilterState& state, const StateSpaceModel& model, const Vector& z,
                      const Matrix& R);

/// x̄_{k+1} = F_k x̂_k,  P̄_{k+1} = F_k P_k F_kᵀ + Q_k.
FilterState kf_predict(const FilterState& state, const StateSpaceModel& model);

/// Componentwise clamp of z into the band H x̄ ± C. A component whose
/// innovation magnitude is >= C is replaced by (H x̄)_i + C·sign(innovation).
ClipResult clip_observation(const Vector& z, const Vector& x_prior, const Matrix& H, double C);

/// Measurement update for heavy-tailed observation noise. The observation is
/// clipped first; the unknown noise covariance is then replaced by the
/// rank-one outer product d·dᵀ of the clipped innovation d = z̃ − Hx̄:
///   K = P̄Hᵀ(2·HP̄Hᵀ + d·dᵀ)⁻¹,  x̂ = x̄ + K·d,  P = (I − KH)P̄.
FilterState mkf_update(const FilterState& state, const StateSpaceModel& model, const Vector& z,
                       const ModifiedFilterConfig& cfg);

/// Dispatches to kf_update or mkf_update.
FilterState filter_update(const FilterState& state, const StateSpaceModel& model,
                          const Vector& z, const FilterVariant& variant);

/// Update with z_k, record x̄_k and x̂_k, predict to k+1; for every step of
/// the record. Returns a copy of `record` with the estimate columns filled.
RunRecord run_filter(const RunRecord& record, const StateSpaceModel& model,
                     const FilterVariant& variant, const FilterState& init);

}  // namespace levykf
