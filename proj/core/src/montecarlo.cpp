#include "levykf/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "levykf/errors.hpp"

namespace levykf {

namespace {

double median_of(std::vector<double>& values) {
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

double distance_on(const Vector& estimate, const Vector& truth,
                   const std::vector<std::size_t>& indices) {
    double s = 0.0;
    for (std::size_t i : indices) {
        const double d = estimate.at(i) - truth.at(i);
        s += d * d;
    }
    return std::sqrt(s);
}

std::size_t resolve_threads(std::size_t requested, std::size_t num_runs) {
    std::size_t t = requested == 0 ? std::thread::hardware_concurrency() : requested;
    return std::clamp<std::size_t>(t, 1, std::max<std::size_t>(num_runs, 1));
}

}  // namespace

RunStreams experiment_streams(std::uint64_t seed, std::size_t run_index) {
    const auto r = static_cast<std::uint64_t>(run_index);
    return RunStreams{RngStream(seed, 2 * r), RngStream(seed, 2 * r + 1)};
}

std::vector<std::size_t> observed_indices(const Matrix& H) {
    std::vector<std::size_t> out;
    out.reserve(H.rows());
    for (std::size_t i = 0; i < H.rows(); ++i) {
        std::optional<std::size_t> found;
        for (std::size_t j = 0; j < H.cols(); ++j) {
            if (H(i, j) == 0.0) continue;
            if (H(i, j) != 1.0 || found) {
                throw SpecificationError(
                    "position-error metrics need H to select state components; row " +
                    std::to_string(i) + " is not a unit selector");
            }
            found = j;
        }
        if (!found) {
            throw SpecificationError("position-error metrics: row " + std::to_string(i) +
                                     " of H is zero");
        }
        out.push_back(*found);
    }
    return out;
}

std::vector<StepErrors> compute_metrics(const RunRecord& record,
                                        const std::vector<std::size_t>& indices) {
    if (!record.filtered()) throw StateError("compute_metrics: record has not been filtered");
    std::vector<StepErrors> out;
    out.reserve(record.size());
    for (const auto& step : record.steps) {
        if (step.z.dim() != indices.size()) {
            throw DimensionError("compute_metrics: observation dim " +
                                 std::to_string(step.z.dim()) + " vs " +
                                 std::to_string(indices.size()) + " observed indices");
        }
        double obs = 0.0;
        for (std::size_t i = 0; i < indices.size(); ++i) {
            const double d = step.z[i] - step.x_true.at(indices[i]);
            obs += d * d;
        }
        out.push_back(StepErrors{std::sqrt(obs), distance_on(*step.x_prior, step.x_true, indices),
                                 distance_on(*step.x_post, step.x_true, indices)});
    }
    return out;
}

FilterState initial_state_for(const StateSpaceModel& model, const Vector& z0,
                              const ExperimentOptions& options) {
    const Matrix p0 = options.initial_covariance.value_or(Matrix::identity(model.state_dim()));
    return kf_init(initial_estimate_from_observation(model.H(0), z0), p0);
}

RunRecord run_single(const StateSpaceModel& model, const FilterVariant& variant,
                     std::size_t num_steps, std::uint64_t seed, std::size_t run_index,
                     const ExperimentOptions& options) {
    auto streams = experiment_streams(seed, run_index);
    RunRecord record = simulate(model, num_steps, streams.state, streams.obs);
    const FilterState init = initial_state_for(model, record.steps.front().z, options);
    return run_filter(record, model, variant, init);
}

MetricsSeries run_experiment(const StateSpaceModel& model, const FilterVariant& variant,
                             std::size_t num_steps, std::size_t num_runs, std::uint64_t seed,
                             const ExperimentOptions& options) {
    if (num_runs == 0) throw SpecificationError("run_experiment: num_runs must be at least 1");
    if (num_steps == 0) throw SpecificationError("run_experiment: num_steps must be at least 1");
    const std::vector<std::size_t> indices = observed_indices(model.H(0));

    std::vector<std::vector<StepErrors>> per_run(num_runs);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    std::size_t failed_run = num_runs;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= num_runs || failed.load()) return;
            try {
                per_run[r] = compute_metrics(
                    run_single(model, variant, num_steps, seed, r, options), indices);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (r < failed_run) {
                    failed_run = r;
                    failure = std::current_exception();
                }
                failed.store(true);
            }
        }
    };

    const std::size_t threads = resolve_threads(options.threads, num_runs);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    if (failure) {
        std::string what = "run " + std::to_string(failed_run) + " failed";
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& e) {
            what += ": ";
            what += e.what();
        } catch (...) {
        }
        throw ExperimentError(failed_run, failure, what);
    }

    MetricsSeries m;
    m.num_runs = num_runs;
    for (auto* v : {&m.er_mean, &m.er_median, &m.or_mean, &m.or_median, &m.post_mean,
                    &m.post_median}) {
        v->assign(num_steps, 0.0);
    }
    const auto runs = static_cast<double>(num_runs);
    std::vector<double> obs(num_runs), est(num_runs), post(num_runs);
    for (std::size_t k = 0; k < num_steps; ++k) {
        double so = 0.0, se = 0.0, sp = 0.0;
        for (std::size_t r = 0; r < num_runs; ++r) {
            const StepErrors& e = per_run[r][k];
            so += e.obs;
            se += e.est;
            sp += e.post;
            obs[r] = e.obs;
            est[r] = e.est;
            post[r] = e.post;
        }
        m.er_mean[k] = so / runs;
        m.or_mean[k] = se / runs;
        m.post_mean[k] = sp / runs;
        m.er_median[k] = median_of(obs);
        m.or_median[k] = median_of(est);
        m.post_median[k] = median_of(post);
    }
    return m;
}

double time_average(const std::vector<double>& values, std::size_t burn_in) {
    if (values.empty()) throw SpecificationError("time_average: empty series");
    const std::size_t start = values.size() > burn_in ? burn_in : 0;
    double s = 0.0;
    for (std::size_t k = start; k < values.size(); ++k) s += values[k];
    return s / static_cast<double>(values.size() - start);
}

SweepResult sweep_threshold(const StateSpaceModel& model, std::size_t num_steps,
                            std::size_t num_runs, std::uint64_t seed,
                            std::vector<double> thresholds, const ExperimentOptions& options) {
    if (thresholds.empty()) throw SpecificationError("sweep_threshold: no thresholds given");
    for (double c : thresholds) {
        if (!(c > 0.0)) {
            throw SpecificationError("sweep_threshold: thresholds must be positive, got " +
                                     std::to_string(c));
        }
    }
    std::sort(thresholds.begin(), thresholds.end());
    if (std::adjacent_find(thresholds.begin(), thresholds.end()) != thresholds.end()) {
        throw SpecificationError("sweep_threshold: duplicate threshold");
    }

    SweepResult out;
    for (double c : thresholds) {
        const FilterVariant variant = ModifiedVariant{ModifiedFilterConfig(c)};
        const MetricsSeries m = run_experiment(model, variant, num_steps, num_runs, seed, options);
        out.thresholds.push_back(c);
        out.time_avg_est_error.push_back(time_average(m.or_mean, options.burn_in));
    }
    return out;
}

}  // namespace levykf
