#include <benchmark/benchmark.h>

#include "placenames/resample.hpp"
#include "support/synthetic.hpp"

using namespace placenames;

static void SmoteEnnBlobs(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    testsupport::gaussian_blobs(n, 263, 3.0, 7, x, y);
    // unbalance 4:1
    FeatureMatrix xs(x.cols);
    std::vector<std::uint8_t> ys;
    int kept1 = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 1 && kept1 >= n / 4) continue;
        kept1 += y[i] == 1;
        xs.push_row(x.row(i));
        ys.push_back(y[i]);
    }
    ResampleConfig cfg;
    cfg.rng_seed = 5;
    for (auto _ : state) {
        const ResampledSet rs = smote_enn(xs, ys, cfg);
        benchmark::DoNotOptimize(rs.x.values.data());
    }
    state.SetItemsProcessed(state.iterations() * xs.rows());
}
BENCHMARK(SmoteEnnBlobs)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
