#include <benchmark/benchmark.h>

#include "quadnc/features.hpp"
#include "quadnc/sampler.hpp"

using namespace quadnc;

static void bench_build_table(benchmark::State& state) {
    const StateSpec spec = StateSpec::fock(4, 0.6, 0.0);
    const int resolution = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_table(spec, resolution));
}
BENCHMARK(bench_build_table)->Arg(1024)->Arg(16384);

static void bench_sample(benchmark::State& state) {
    const SamplerTable table = build_table(StateSpec::spacs(0.32, 0.6, 0.0));
    const int count = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample(table, count, ++seed));
    state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(bench_sample)->Arg(1000)->Arg(16000);

static void bench_rejection(benchmark::State& state) {
    const StateSpec spec = StateSpec::spacs(0.32, 0.6, 0.0);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_rejection(spec, 1000, ++seed));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(bench_rejection);

static void bench_featurize(benchmark::State& state) {
    const SamplerTable table = build_table(StateSpec::coherent(1.0, 0.6, 0.0));
    const QuadratureBatch batch = sample(table, 16000, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(featurize(batch));
    state.SetItemsProcessed(state.iterations() * 16000);
}
BENCHMARK(bench_featurize);

BENCHMARK_MAIN();
