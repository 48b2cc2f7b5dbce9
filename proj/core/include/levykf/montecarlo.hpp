#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <vector>

#include "levykf/filters.hpp"
#include "levykf/model.hpp"
#include "levykf/noise.hpp"

namespace levykf {

/// Position errors of one step of one run.
///  obs  = ‖z_k − x_k‖ over the observed components (the "ER" curve)
///  est  = ‖x̄_k − x_k‖ over the observed components (the "OR" curve)
///  post = ‖x̂_k − x_k‖ over the observed components
struct StepErrors {
    double obs = 0.0;
    double est = 0.0;
    double post = 0.0;
};

/// Per-step averages across runs. Every array has num_steps entries.
struct MetricsSeries {
    std::size_t num_runs = 0;
    std::vector<double> er_mean;
    std::vector<double> er_median;
    std::vector<double> or_mean;
    std::vector<double> or_median;
    std::vector<double> post_mean;
    std::vector<double> post_median;

    std::size_t num_steps() const noexcept { return er_mean.size(); }
};

struct SweepResult {
    std::vector<double> thresholds;
    std::vector<double> time_avg_est_error;
};

struct ExperimentOptions {
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    std::size_t threads = 1;
    /// Initial prior covariance; identity when unset.
    std::optional<Matrix> initial_covariance;
    /// Leading steps left out of time averages.
    std::size_t burn_in = 5;
};

/// A run of an experiment failed. `cause()` holds the original exception.
class ExperimentError : public std::runtime_error {
public:
    ExperimentError(std::size_t run_index, std::exception_ptr cause, const std::string& what)
        : std::runtime_error(what), run_index_(run_index), cause_(std::move(cause)) {}

    std::size_t run_index() const noexcept { return run_index_; }
    const std::exception_ptr& cause() const noexcept { return cause_; }

private:
    std::size_t run_index_;
    std::exception_ptr cause_;
};

/// Streams used by run `run_index`: process noise on stream 2r, measurement
/// noise on stream 2r+1.
struct RunStreams {
    RngStream state;
    RngStream obs;
};
RunStreams experiment_streams(std::uint64_t seed, std::size_t run_index);

/// For a selector H (each row a single 1), the state index each observation
/// component reads. Throws SpecificationError for any other H.
std::vector<std::size_t> observed_indices(const Matrix& H);

/// Per-step errors of a filtered record. Throws StateError if the record
/// has not been filtered.
std::vector<StepErrors> compute_metrics(const RunRecord& record,
                                        const std::vector<std::size_t>& observed_indices);

/// Initial filter state for a run: observed components from z_0, the rest 0,
/// covariance from the options (identity by default).
FilterState initial_state_for(const StateSpaceModel& model, const Vector& z0,
                              const ExperimentOptions& options);

/// Simulate and filter one run with the experiment's stream convention.
RunRecord run_single(const StateSpaceModel& model, const FilterVariant& variant,
                     std::size_t num_steps, std::uint64_t seed, std::size_t run_index,
                     const ExperimentOptions& options = {});

/// Repeats run_single for runs 0..num_runs-1 and reduces the per-step errors
/// in run-index order, so the result is bit-identical for any thread count.
MetricsSeries run_experiment(const StateSpaceModel& model, const FilterVariant& variant,
                             std::size_t num_steps, std::size_t num_runs, std::uint64_t seed,
                             const ExperimentOptions& options = {});

/// Mean of values[burn_in..]. Falls back to the whole series when it is not
/// longer than burn_in.
double time_average(const std::vector<double>& values, std::size_t burn_in);

/// Modified-filter experiment for each threshold with a shared seed (paired
/// runs). Thresholds are reported in increasing order; duplicates and
/// non-positive values are rejected.
SweepResult sweep_threshold(const StateSpaceModel& model, std::size_t num_steps,
                            std::size_t num_runs, std::uint64_t seed,
                            std::vector<double> thresholds,
                            const ExperimentOptions& options = {});

inline constexpr std::size_t kDefaultNumRuns = 2000;

}  // namespace levykf
