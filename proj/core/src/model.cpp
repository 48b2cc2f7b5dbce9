#include "levykf/model.hpp"

#include <algorithm>
#include <string>

#include "levykf/errors.hpp"

namespace levykf {

StepSequence::StepSequence(Matrix m) { items_.push_back(std::move(m)); }

StepSequence::StepSequence(std::vector<Matrix> per_step) : items_(std::move(per_step)) {
    if (items_.empty()) throw SpecificationError("StepSequence: needs at least one matrix");
}

const Matrix& StepSequence::at(std::size_t k) const {
    if (items_.empty()) throw StateError("StepSequence: empty sequence");
    if (items_.size() == 1) return items_.front();
    if (k >= items_.size()) {
        throw SpecificationError("StepSequence: step " + std::to_string(k) +
                                 " is beyond the " + std::to_string(items_.size()) +
                                 " matrices provided");
    }
    return items_[k];
}

namespace {

void require_shape(const StepSequence& seq, std::size_t rows, std::size_t cols,
                   const char* name) {
    for (const auto& m : seq.items()) {
        if (m.rows() != rows || m.cols() != cols) {
            throw DimensionError(std::string(name) + " must be " + std::to_string(rows) + "x" +
                                 std::to_string(cols) + ", got " + m.shape());
        }
    }
}

}  // namespace

StateSpaceModel::StateSpaceModel(StepSequence transition, StepSequence observation,
                                 StepSequence process_covariance, NoiseSpec measurement_noise,
                                 Vector x0)
    : n_(x0.dim()),
      m_(measurement_noise.dim()),
      transition_(std::move(transition)),
      observation_(std::move(observation)),
      process_covariance_(std::move(process_covariance)),
      measurement_noise_(std::move(measurement_noise)),
      x0_(std::move(x0)) {
    if (n_ == 0) throw SpecificationError("StateSpaceModel: state dimension must be positive");
    if (transition_.length() == 0 || observation_.length() == 0 ||
        process_covariance_.length() == 0) {
        throw SpecificationError("StateSpaceModel: F, H and Q are required");
    }
    require_shape(transition_, n_, n_, "F");
    require_shape(observation_, m_, n_, "H");
    require_shape(process_covariance_, n_, n_, "Q");
    process_noise_.reserve(process_covariance_.length());
    for (const auto& q : process_covariance_.items()) {
        if (!is_symmetric(q)) throw SpecificationError("Q must be symmetric");
        process_noise_.push_back(NoiseSpec::gaussian(q));
    }
}

const Matrix& StateSpaceModel::Q(std::size_t k) const { return process_covariance_.at(k); }

const NoiseSpec& StateSpaceModel::process_noise(std::size_t k) const {
    if (process_noise_.size() == 1) return process_noise_.front();
    process_covariance_.at(k);  // range check
    return process_noise_[k];
}

std::size_t StateSpaceModel::horizon() const noexcept {
    return std::max({transition_.length(), observation_.length(), process_covariance_.length()});
}

StateSpaceModel StateSpaceModel::with_measurement_noise(NoiseSpec noise) const {
    return StateSpaceModel(transition_, observation_, process_covariance_, std::move(noise), x0_);
}

StateSpaceModel StateSpaceModel::with_process_covariance(StepSequence q) const {
    return StateSpaceModel(transition_, observation_, std::move(q), measurement_noise_, x0_);
}

bool RunRecord::filtered() const noexcept {
    return !steps.empty() && std::all_of(steps.begin(), steps.end(), [](const StepRecord& s) {
        return s.x_prior.has_value() && s.x_post.has_value();
    });
}

RunRecord simulate(const StateSpaceModel& model, std::size_t num_steps, RngStream& state_rng,
                   RngStream& obs_rng) {
    if (num_steps == 0) throw SpecificationError("simulate: num_steps must be at least 1");
    const std::size_t horizon = model.horizon();
    if (horizon > 1 && horizon < num_steps) {
        throw SpecificationError("simulate: model provides " + std::to_string(horizon) +
                                 " per-step matrices but " + std::to_string(num_steps) +
                                 " steps were requested");
    }

    RunRecord record;
    record.steps.reserve(num_steps);
    Vector x = model.x0();
    for (std::size_t k = 0; k < num_steps; ++k) {
        StepRecord step;
        step.k = k;
        step.x_true = x;
        step.z = model.H(k) * x + sample(model.measurement_noise(), obs_rng);
        record.steps.push_back(std::move(step));
        if (k + 1 < num_steps) {
            x = model.F(k) * x + sample_gaussian(model.process_noise(k), state_rng);
        }
    }
    return record;
}

StateSpaceModel tracking_preset(const TrackingParameters& params) {
    const Matrix f{{1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    const Matrix h{{1, 0, 0, 0}, {0, 1, 0, 0}};
    const Matrix q = scalar_mul(params.process_variance, Matrix::identity(4));
    auto noise = NoiseSpec::sum({
        NoiseSpec::alpha_stable(params.stable_alpha, params.stable_sigma, 2),
        NoiseSpec::gaussian(scalar_mul(params.gaussian_variance, Matrix::identity(2))),
    });
    return StateSpaceModel(f, h, q, std::move(noise), Vector{10.0, 10.0, 1.0, 0.0});
}

}  // namespace levykf
