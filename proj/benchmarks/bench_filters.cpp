#include <benchmark/benchmark.h>

#include "levykf/levykf.hpp"

namespace {

using namespace levykf;

void BM_StableSample(benchmark::State& state) {
    RngStream rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_alpha_stable(1.3, 10.0, rng));
}
BENCHMARK(BM_StableSample);

void BM_TrackingMeasurementNoise(benchmark::State& state) {
    const StateSpaceModel model = tracking_preset();
    RngStream rng(1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(sample(model.measurement_noise(), rng));
}
BENCHMARK(BM_TrackingMeasurementNoise);

void BM_SolveSpd(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Matrix a = Matrix::identity(n);
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = 0.3;
    const Matrix b = Matrix::identity(n);
    for (auto _ : state) benchmark::DoNotOptimize(solve_spd(a, b));
}
BENCHMARK(BM_SolveSpd)->Arg(2)->Arg(4)->Arg(16);

template <bool Modified>
void BM_TrackingUpdatePredict(benchmark::State& state) {
    const StateSpaceModel model = tracking_preset();
    const FilterVariant variant = Modified ? FilterVariant{ModifiedVariant{ModifiedFilterConfig(40)}}
                                           : FilterVariant{ConventionalVariant{Matrix::diagonal(Vector{5, 5})}};
    const Vector z{12.0, 9.0};
    const FilterState init = kf_init(Vector{10, 10, 0, 0}, Matrix::identity(4));
    for (auto _ : state) {
        FilterState s = filter_update(init, model, z, variant);
        benchmark::DoNotOptimize(kf_predict(s, model));
    }
}
BENCHMARK(BM_TrackingUpdatePredict<false>)->Name("BM_TrackingUpdatePredict/conventional");
BENCHMARK(BM_TrackingUpdatePredict<true>)->Name("BM_TrackingUpdatePredict/modified");

void BM_Experiment(benchmark::State& state) {
    const StateSpaceModel model = tracking_preset();
    ExperimentOptions opts;
    opts.threads = 1;
    const auto runs = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run_experiment(model, ModifiedVariant{ModifiedFilterConfig(40)}, 100, runs, 1, opts));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(runs));
}
BENCHMARK(BM_Experiment)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
