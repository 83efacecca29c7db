#include <benchmark/benchmark.h>

#include <vector>

#include "quadnc/features.hpp"
#include "quadnc/nn.hpp"
#include "quadnc/rng.hpp"

using namespace quadnc;

namespace {

std::vector<std::vector<double>> random_inputs(int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        std::vector<double> x(kNumBins);
        for (auto& v : x)
            v = rng.uniform(0.0, 0.05);
        rows.push_back(std::move(x));
    }
    return rows;
}

std::vector<int> alternating_labels(int count) {
    std::vector<int> labels(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        labels[static_cast<std::size_t>(i)] = i % 2;
    return labels;
}

} // namespace

static void bench_forward(benchmark::State& state) {
    const NetworkModel model = make_classifier(1);
    const auto rows = random_inputs(1, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            forward(model, std::span<const double>(rows[0])));
}
BENCHMARK(bench_forward);

static void bench_gradient_batch(benchmark::State& state) {
    const NetworkModel model = make_classifier(1);
    const int batch = static_cast<int>(state.range(0));
    const auto rows = random_inputs(batch, 3);
    const auto labels = alternating_labels(batch);
    for (auto _ : state)
        benchmark::DoNotOptimize(gradient(model, rows, labels));
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(bench_gradient_batch)->Arg(32)->Arg(128);

static void bench_fit_small(benchmark::State& state) {
    std::vector<FeatureVector> features;
    std::vector<ClassLabel> labels;
    Rng rng(9);
    for (int i = 0; i < 256; ++i) {
        FeatureVector f;
        const int peak = (i % 2 == 0) ? 40 + static_cast<int>(rng.next_below(20))
                                      : 100 + static_cast<int>(rng.next_below(20));
        f.bins[static_cast<std::size_t>(peak)] = 1.0;
        f.kept = 1000;
        features.push_back(f);
        labels.push_back(i % 2 == 0 ? ClassLabel::Classical : ClassLabel::Nonclassical);
    }
    TrainConfig cfg;
    cfg.max_epochs = 5;
    cfg.patience = 5;
    for (auto _ : state)
        benchmark::DoNotOptimize(fit(features, labels, cfg));
}
BENCHMARK(bench_fit_small)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
