// Serial reference path against the OpenMP path for the shot loops.

#include <benchmark/benchmark.h>

#include "rydberg/measurement.hpp"
#include "rydberg/protocol.hpp"

using namespace rydberg;

namespace {

ExperimentConfig noisy_pair() {
    ExperimentConfig c;
    c.geometry.separation_um = 3.6;
    c.noise = NoiseModel::experiment();
    c.durations_ns = duration_grid(0.0, 500.0, 10.0);
    c.seed = 2008;
    return c;
}

Execution execution(const benchmark::State& state) {
    return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

void BM_run_experiment(benchmark::State& state) {
    auto c = noisy_pair();
    c.n_shots = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c, execution(state)));
    state.SetItemsProcessed(state.iterations() * c.n_shots *
                            static_cast<long>(c.durations_ns.size()));
}

void BM_expected_probabilities(benchmark::State& state) {
    const auto c = noisy_pair();
    const auto n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(expected_probabilities(c, n, execution(state)));
    state.SetItemsProcessed(state.iterations() * n * static_cast<long>(c.durations_ns.size()));
}

void BM_run_protocol(benchmark::State& state) {
    GeometryConfig g;
    g.separation_um = 3.6;
    auto p = ProtocolConfig::matched(LaserConfig{}, g);
    p.noise = NoiseModel::experiment();
    const auto n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_protocol(p, n, 1, execution(state)));
    state.SetItemsProcessed(state.iterations() * n);
}

} // namespace

BENCHMARK(BM_run_experiment)
    ->ArgNames({"shots", "parallel"})
    ->ArgsProduct({{100, 1000}, {0, 1}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_expected_probabilities)
    ->ArgNames({"samples", "parallel"})
    ->ArgsProduct({{1000}, {0, 1}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_protocol)
    ->ArgNames({"shots", "parallel"})
    ->ArgsProduct({{1000, 10000}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
