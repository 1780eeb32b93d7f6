#include <benchmark/benchmark.h>

#include "placenames/forest.hpp"
#include "support/synthetic.hpp"

using namespace placenames;

static void ForestFit(benchmark::State& state) {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    testsupport::gaussian_blobs(static_cast<int>(state.range(0)), 263, 2.0, 3, x, y);
    ForestConfig cfg;
    cfg.n_trees = 10;
    cfg.rng_seed = 1;
    for (auto _ : state) {
        const ForestModel model = fit_forest(x, y, cfg);
        benchmark::DoNotOptimize(model.trees.data());
    }
    state.SetItemsProcessed(state.iterations() * cfg.n_trees);
}
BENCHMARK(ForestFit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void ForestPredict(benchmark::State& state) {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    testsupport::gaussian_blobs(1000, 263, 2.0, 3, x, y);
    ForestConfig cfg;
    cfg.rng_seed = 1;
    const ForestModel model = fit_forest(x, y, cfg);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.predict_proba(x.row(i % x.rows())));
        ++i;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(ForestPredict);
