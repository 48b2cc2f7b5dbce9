#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "levykf/errors.hpp"
#include "levykf/montecarlo.hpp"
#include "support/oracles.hpp"

namespace levykf {
namespace {

using testing::Gen;

const FilterVariant kModified = ModifiedVariant{ModifiedFilterConfig(40)};

StepRecord filtered_step(std::size_t k, Vector x, Vector z, Vector prior, Vector post) {
    StepRecord s;
    s.k = k;
    s.x_true = std::move(x);
    s.z = std::move(z);
    s.x_prior = std::move(prior);
    s.x_post = std::move(post);
    s.clipped.assign(s.z.dim(), false);
    return s;
}

StateSpaceModel small_tracking() {
    TrackingParameters p;
    p.stable_sigma = 2.0;
    return tracking_preset(p);
}

TEST(ComputeMetrics, Examples) {
    const std::vector<std::size_t> idx{0, 1};
    RunRecord rec;
    rec.steps.push_back(filtered_step(0, Vector{1, 2, 9, 9}, Vector{1, 2}, Vector{1, 2, 0, 0},
                                      Vector{1, 2, 5, 5}));
    rec.steps.push_back(filtered_step(1, Vector{0, 0, 0, 0}, Vector{3, 4}, Vector{-3, 4, 7, 7},
                                      Vector{0, 1, 0, 0}));
    const auto e = compute_metrics(rec, idx);
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0].obs, 0.0);
    EXPECT_EQ(e[0].est, 0.0);
    EXPECT_EQ(e[0].post, 0.0);
    EXPECT_EQ(e[1].obs, 5.0);
    EXPECT_EQ(e[1].est, 5.0);
    EXPECT_EQ(e[1].post, 1.0);
}

TEST(ComputeMetrics, MatchesFormulaOnRandomRecord) {
    Gen gen(51);
    RunRecord rec;
    for (std::size_t k = 0; k < 50; ++k) {
        rec.steps.push_back(filtered_step(k, gen.vector(4, 100), gen.vector(2, 100),
                                          gen.vector(4, 100), gen.vector(4, 100)));
    }
    const auto e = compute_metrics(rec, {0, 1});
    for (std::size_t k = 0; k < rec.size(); ++k) {
        const auto& s = rec.steps[k];
        const double obs = std::hypot(s.z[0] - s.x_true[0], s.z[1] - s.x_true[1]);
        const double est = std::hypot((*s.x_prior)[0] - s.x_true[0], (*s.x_prior)[1] - s.x_true[1]);
        const double post = std::hypot((*s.x_post)[0] - s.x_true[0], (*s.x_post)[1] - s.x_true[1]);
        EXPECT_NEAR(e[k].obs, obs, 1e-12 * obs);
        EXPECT_NEAR(e[k].est, est, 1e-12 * est);
        EXPECT_NEAR(e[k].post, post, 1e-12 * post);
    }
}

TEST(ComputeMetrics, RejectsUnfilteredRecord) {
    RngStream s(1, 0), o(1, 1);
    const RunRecord rec = simulate(tracking_preset(), 3, s, o);
    EXPECT_THROW(compute_metrics(rec, {0, 1}), StateError);
}

TEST(ObservedIndices, SelectorOnly) {
    EXPECT_EQ(observed_indices(Matrix{{0, 0, 1, 0}, {1, 0, 0, 0}}), (std::vector<std::size_t>{2, 0}));
    EXPECT_THROW(observed_indices(Matrix{{1, 1}}), SpecificationError);
    EXPECT_THROW(observed_indices(Matrix{{2, 0}}), SpecificationError);
    EXPECT_THROW(observed_indices(Matrix{{0, 0}}), SpecificationError);
}

TEST(RunExperiment, ZeroNoiseGivesZeroError) {
    // Stationary target: the initial estimate from z_0 is then exact.
    const StateSpaceModel preset = tracking_preset();
    const StateSpaceModel model(preset.F(0), preset.H(0), Matrix::zeros(4, 4), NoiseSpec::zero(2),
                                Vector{10, 10, 0, 0});
    for (const FilterVariant& v : {kModified, FilterVariant{ConventionalVariant{Matrix::identity(2)}}}) {
        const MetricsSeries m = run_experiment(model, v, 40, 10, 3);
        EXPECT_EQ(m.num_runs, 10u);
        ASSERT_EQ(m.num_steps(), 40u);
        for (std::size_t k = 0; k < 40; ++k) {
            EXPECT_EQ(m.er_mean[k], 0.0);
            EXPECT_LE(m.or_mean[k], 1e-8) << k;
            EXPECT_LE(m.post_mean[k], 1e-8) << k;
        }
    }
}

TEST(RunExperiment, ExactInitialStateZeroNoiseIsExact) {
    // A single run with the prior seeded at the truth has zero error throughout.
    const StateSpaceModel model = tracking_preset()
                                      .with_measurement_noise(NoiseSpec::zero(2))
                                      .with_process_covariance(Matrix::zeros(4, 4));
    RngStream s(1, 0), o(1, 1);
    const RunRecord rec = simulate(model, 100, s, o);
    const RunRecord out = run_filter(rec, model, kModified, kf_init(model.x0(), Matrix::identity(4)));
    for (const auto& e : compute_metrics(out, {0, 1})) {
        EXPECT_LE(e.est, 1e-8);
        EXPECT_LE(e.post, 1e-8);
    }
}

TEST(RunExperiment, SingleRunMatchesHandPipeline) {
    const StateSpaceModel model = tracking_preset();
    const std::uint64_t seed = 2024;
    const MetricsSeries m = run_experiment(model, kModified, 60, 1, seed);

    RngStream state(seed, 0), obs(seed, 1);
    const RunRecord rec = simulate(model, 60, state, obs);
    const Vector x0 = Vector{rec.steps[0].z[0], rec.steps[0].z[1], 0, 0};
    const RunRecord out = run_filter(rec, model, kModified, kf_init(x0, Matrix::identity(4)));
    const auto e = compute_metrics(out, {0, 1});
    for (std::size_t k = 0; k < 60; ++k) {
        EXPECT_EQ(m.er_mean[k], e[k].obs);
        EXPECT_EQ(m.or_mean[k], e[k].est);
        EXPECT_EQ(m.post_mean[k], e[k].post);
        EXPECT_EQ(m.er_median[k], e[k].obs);
    }
}

TEST(RunExperiment, BitIdenticalAcrossThreadCounts) {
    const StateSpaceModel model = tracking_preset();
    ExperimentOptions one;
    one.threads = 1;
    const MetricsSeries ref = run_experiment(model, kModified, 50, 64, 9, one);
    for (std::size_t t : {2u, 3u, 8u}) {
        ExperimentOptions opts;
        opts.threads = t;
        const MetricsSeries m = run_experiment(model, kModified, 50, 64, 9, opts);
        EXPECT_EQ(m.er_mean, ref.er_mean) << t;
        EXPECT_EQ(m.or_mean, ref.or_mean) << t;
        EXPECT_EQ(m.post_mean, ref.post_mean) << t;
        EXPECT_EQ(m.or_median, ref.or_median) << t;
    }
}

TEST(RunExperiment, MeanIsOrderedSumOverRuns) {
    const StateSpaceModel model = small_tracking();
    const std::size_t runs = 7, steps = 20;
    const MetricsSeries m = run_experiment(model, kModified, steps, runs, 5);
    std::vector<std::vector<StepErrors>> per_run;
    for (std::size_t r = 0; r < runs; ++r)
        per_run.push_back(compute_metrics(run_single(model, kModified, steps, 5, r), {0, 1}));
    for (std::size_t k = 0; k < steps; ++k) {
        double s = 0.0;
        std::vector<double> est;
        for (std::size_t r = 0; r < runs; ++r) {
            s += per_run[r][k].est;
            est.push_back(per_run[r][k].est);
        }
        EXPECT_EQ(m.or_mean[k], s / runs);
        std::sort(est.begin(), est.end());
        EXPECT_EQ(m.or_median[k], est[runs / 2]);
        EXPECT_GE(m.er_mean[k], 0.0);
        EXPECT_GE(m.or_mean[k], 0.0);
        EXPECT_GE(m.post_mean[k], 0.0);
    }
}

TEST(RunExperiment, PosteriorWithinTriangleBound) {
    const StateSpaceModel model = tracking_preset();
    for (std::size_t r = 0; r < 20; ++r) {
        auto streams = experiment_streams(77, r);
        const RunRecord rec = simulate(model, 50, streams.state, streams.obs);
        FilterState st = initial_state_for(model, rec.steps[0].z, {});
        for (std::size_t k = 0; k < rec.size(); ++k) {
            st = mkf_update(st, model, rec.steps[k].z, ModifiedFilterConfig(40));
            const Vector x = rec.steps[k].x_true;
            const Vector correction = *st.last_gain * *st.last_innovation;
            const double est = std::hypot(st.x_prior[0] - x[0], st.x_prior[1] - x[1]);
            const double post = std::hypot((*st.x_post)[0] - x[0], (*st.x_post)[1] - x[1]);
            EXPECT_LE(post, est + std::hypot(correction[0], correction[1]) + 1e-9);
            if (k + 1 < rec.size()) st = kf_predict(st, model);
        }
    }
}

TEST(RunExperiment, FailureReportsRunIndex) {
    // Zero prior covariance and no measurement noise make 2HP̄Hᵀ + ddᵀ singular.
    const StateSpaceModel model = tracking_preset()
                                      .with_measurement_noise(NoiseSpec::zero(2))
                                      .with_process_covariance(Matrix::zeros(4, 4));
    ExperimentOptions opts;
    opts.initial_covariance = Matrix::zeros(4, 4);
    opts.threads = 2;
    try {
        run_experiment(model, kModified, 5, 6, 1, opts);
        FAIL() << "expected ExperimentError";
    } catch (const ExperimentError& e) {
        EXPECT_EQ(e.run_index(), 0u);
        EXPECT_THROW(std::rethrow_exception(e.cause()), SingularityError);
    }
}

TEST(RunExperiment, RejectsEmptyCountsAndNonSelectorH) {
    EXPECT_THROW(run_experiment(tracking_preset(), kModified, 10, 0, 1), SpecificationError);
    EXPECT_THROW(run_experiment(tracking_preset(), kModified, 0, 10, 1), SpecificationError);
    const StateSpaceModel mixed(Matrix::identity(2), Matrix{{1, 1}}, Matrix::identity(2),
                                NoiseSpec::zero(1), Vector{0, 0});
    EXPECT_THROW(run_experiment(mixed, kModified, 10, 2, 1), SpecificationError);
}

TEST(TimeAverage, SkipsBurnIn) {
    EXPECT_EQ(time_average({100, 100, 1, 2, 3}, 2), 2.0);
    EXPECT_EQ(time_average({4, 6}, 5), 5.0);
    EXPECT_THROW(time_average({}, 0), SpecificationError);
}

TEST(SweepThreshold, SingleThresholdMatchesRunExperiment) {
    const StateSpaceModel model = small_tracking();
    const SweepResult sw = sweep_threshold(model, 40, 30, 8, {25.0});
    const MetricsSeries m = run_experiment(model, ModifiedVariant{ModifiedFilterConfig(25.0)}, 40, 30, 8);
    ASSERT_EQ(sw.thresholds, (std::vector<double>{25.0}));
    EXPECT_EQ(sw.time_avg_est_error.front(), time_average(m.or_mean, 5));
}

TEST(SweepThreshold, SortsAndValidates) {
    const StateSpaceModel model = small_tracking();
    const SweepResult sw = sweep_threshold(model, 10, 4, 8, {70.0, 30.0, 40.0});
    EXPECT_EQ(sw.thresholds, (std::vector<double>{30.0, 40.0, 70.0}));
    EXPECT_EQ(sw.time_avg_est_error.size(), 3u);
    EXPECT_THROW(sweep_threshold(model, 10, 4, 8, {}), SpecificationError);
    EXPECT_THROW(sweep_threshold(model, 10, 4, 8, {30.0, 30.0}), SpecificationError);
    EXPECT_THROW(sweep_threshold(model, 10, 4, 8, {0.0}), SpecificationError);
    EXPECT_THROW(sweep_threshold(model, 10, 4, 8, {std::nan("")}), SpecificationError);
}

}  // namespace
}  // namespace levykf
