#include "levykf/filters.hpp"

#include <cmath>
#include <string>

#include "levykf/errors.hpp"

namespace levykf {

namespace {

void require_prior_only(const FilterState& state, const char* op) {
    if (state.has_posterior()) {
        throw StateError(std::string(op) + ": step " + std::to_string(state.k) +
                         " has already been updated");
    }
}

void require_obs_dim(const Vector& z, const Matrix& h, const char* op) {
    if (z.dim() != h.rows()) {
        throw DimensionError(std::string(op) + ": observation has dim " + std::to_string(z.dim()) +
                             " but H is " + h.shape());
    }
}

// Shared tail of both updates: given the innovation-space matrix S and the
// innovation d, K = P̄HᵀS⁻¹ and the short-form covariance update.
FilterState finish_update(const FilterState& state, const Matrix& h, const Matrix& s,
                          const Vector& innovation) {
    const Matrix hp = h * state.P_prior;  // H P̄, m×n
    // S and P̄ are symmetric, so K = (S⁻¹ H P̄)ᵀ.
    const Matrix gain = transpose(solve_spd(symmetrize(s), hp));
    const std::size_t n = state.x_prior.dim();

    FilterState next = state;
    next.x_post = state.x_prior + gain * innovation;
    next.P_post = symmetrize((Matrix::identity(n) - gain * h) * state.P_prior);
    next.last_gain = gain;
    next.last_innovation = innovation;
    return next;
}

}  // namespace

ModifiedFilterConfig::ModifiedFilterConfig(double clip_threshold)
    : clip_threshold_(clip_threshold) {
    if (!(clip_threshold > 0.0)) {
        throw SpecificationError("clip threshold C must be positive, got " +
                                 std::to_string(clip_threshold));
    }
}

FilterState kf_init(const Vector& x0_est, const Matrix& P0) {
    if (!P0.is_square() || P0.rows() != x0_est.dim()) {
        throw SpecificationError("kf_init: P0 is " + P0.shape() + " but the state has dim " +
                                 std::to_string(x0_est.dim()));
    }
    if (!is_symmetric(P0)) throw SpecificationError("kf_init: P0 is not symmetric");
    if (!is_psd(P0)) throw SpecificationError("kf_init: P0 is not positive semidefinite");
    FilterState s;
    s.k = 0;
    s.x_prior = x0_est;
    s.P_prior = P0;
    return s;
}

Vector initial_estimate_from_observation(const Matrix& H, const Vector& z) {
    require_obs_dim(z, H, "initial_estimate_from_observation");
    const Matrix y = solve_spd(H * transpose(H), as_column(z));
    return transpose(H) * y.col(0);
}

FilterState kf_update(const FilterState& state, const StateSpaceModel& model, const Vector& z,
                      const Matrix& R) {
    require_prior_only(state, "kf_update");
    const Matrix& h = model.H(state.k);
    require_obs_dim(z, h, "kf_update");
    if (R.rows() != h.rows() || R.cols() != h.rows()) {
        throw DimensionError("kf_update: R is " + R.shape() + ", expected " +
                             std::to_string(h.rows()) + "x" + std::to_string(h.rows()));
    }
    if (!is_symmetric(R) || !is_psd(R)) {
        throw SpecificationError("kf_update: R must be symmetric positive semidefinite");
    }

    const Matrix s = h * state.P_prior * transpose(h) + R;
    FilterState next = finish_update(state, h, s, z - h * state.x_prior);
    next.last_clipped.assign(h.rows(), false);
    return next;
}

FilterState kf_predict(const FilterState& state, const StateSpaceModel& model) {
    if (!state.has_posterior()) {
        throw StateError("kf_predict: step " + std::to_string(state.k) + " has no posterior yet");
    }
    const Matrix& f = model.F(state.k);
    FilterState next = state;
    next.x_prior = f * *state.x_post;
    next.P_prior = symmetrize(f * *state.P_post * transpose(f) + model.Q(state.k));
    next.x_post.reset();
    next.P_post.reset();
    next.k = state.k + 1;
    return next;
}

ClipResult clip_observation(const Vector& z, const Vector& x_prior, const Matrix& H, double C) {
    if (!(C > 0.0)) throw SpecificationError("clip_observation: C must be positive");
    require_obs_dim(z, H, "clip_observation");
    const Vector predicted = H * x_prior;

    ClipResult out{z, std::vector<bool>(z.dim(), false)};
    for (std::size_t i = 0; i < z.dim(); ++i) {
        const double d = z[i] - predicted[i];
        if (std::abs(d) >= C) {
            out.z_clipped[i] = predicted[i] + std::copysign(C, d);
            out.clipped_mask[i] = true;
        }
    }
    return out;
}

FilterState mkf_update(const FilterState& state, const StateSpaceModel& model, const Vector& z,
                       const ModifiedFilterConfig& cfg) {
    require_prior_only(state, "mkf_update");
    const Matrix& h = model.H(state.k);
    require_obs_dim(z, h, "mkf_update");

    const double c = cfg.clip_threshold();
    ClipResult clip = clip_observation(z, state.x_prior, h, c);
    // Clipped components are set to exactly ±C rather than recomputed from
    // z̃, which could overshoot C by rounding.
    Vector d = z - h * state.x_prior;
    for (std::size_t i = 0; i < d.dim(); ++i) {
        if (clip.clipped_mask[i]) d[i] = std::copysign(c, d[i]);
    }
    const Matrix s = 2.0 * (h * state.P_prior * transpose(h)) + outer(d, d);
    FilterState next = finish_update(state, h, s, d);
    next.last_clipped = std::move(clip.clipped_mask);
    return next;
}

FilterState filter_update(const FilterState& state, const StateSpaceModel& model,
                          const Vector& z, const FilterVariant& variant) {
    if (const auto* c = std::get_if<ConventionalVariant>(&variant)) {
        return kf_update(state, model, z, c->R);
    }
    return mkf_update(state, model, z, std::get<ModifiedVariant>(variant).config);
}

RunRecord run_filter(const RunRecord& record, const StateSpaceModel& model,
                     const FilterVariant& variant, const FilterState& init) {
    if (record.steps.empty()) throw SpecificationError("run_filter: empty record");
    if (init.x_prior.dim() != model.state_dim()) {
        throw DimensionError("run_filter: initial state has dim " +
                             std::to_string(init.x_prior.dim()) + ", model has " +
                             std::to_string(model.state_dim()));
    }

    RunRecord out = record;
    FilterState state = init;
    for (std::size_t idx = 0; idx < out.steps.size(); ++idx) {
        StepRecord& step = out.steps[idx];
        if (step.k != state.k) {
            throw StateError("run_filter: record step " + std::to_string(step.k) +
                             " does not follow filter step " + std::to_string(state.k));
        }
        state = filter_update(state, model, step.z, variant);
        step.x_prior = state.x_prior;
        step.x_post = *state.x_post;
        step.clipped = state.last_clipped;
        if (idx + 1 < out.steps.size()) state = kf_predict(state, model);
    }
    return out;
}

}  // namespace levykf
