#include <benchmark/benchmark.h>

#include "quadnc/states.hpp"

using namespace quadnc;

namespace {

void bench_density(benchmark::State& state, const StateSpec& spec) {
    double x = -8.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(density(spec, x));
        x += 1e-4;
        if (x > 8.0)
            x = -8.0;
    }
}

} // namespace

BENCHMARK_CAPTURE(bench_density, coherent, StateSpec::coherent(1.5, 0.6, 0.3));
BENCHMARK_CAPTURE(bench_density, thermal, StateSpec::thermal(2.0, 0.6, 0.0));
BENCHMARK_CAPTURE(bench_density, fock6, StateSpec::fock(6, 0.6, 0.0));
BENCHMARK_CAPTURE(bench_density, squeezed, StateSpec::squeezed(1.0, 0.75, 0.6, 0.4));
BENCHMARK_CAPTURE(bench_density, spacs, StateSpec::spacs(1.0, 0.6, 0.2));
BENCHMARK_CAPTURE(bench_density, mixture, StateSpec::mixture(2.0, 0.6, 0.1));
BENCHMARK_CAPTURE(bench_density, phase_averaged,
                  StateSpec::phase_averaged(2.0, 0.6, 0.0));
BENCHMARK_CAPTURE(bench_density, cat, StateSpec::cat(2.0, 0.6, 0.7));

static void bench_density_grid(benchmark::State& state) {
    const StateSpec spec = StateSpec::spacs(1.0, 0.6, 0.0);
    const int npoints = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(density_grid(spec, kXMin, kXMax, npoints));
    state.SetItemsProcessed(state.iterations() * npoints);
}
BENCHMARK(bench_density_grid)->Arg(1024)->Arg(16384);

BENCHMARK_MAIN();
