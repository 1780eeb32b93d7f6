#include <benchmark/benchmark.h>

#include "placenames/features.hpp"
#include "support/synthetic.hpp"

using namespace placenames;

static void FeatureExtract(benchmark::State& state) {
    const CleanCorpus corpus = testsupport::synthetic_corpus(2000, 100, 1);
    std::array<float, kFeatureCount> out;
    std::size_t i = 0;
    for (auto _ : state) {
        extract(corpus.names[i % corpus.names.size()].normalized, out);
        benchmark::DoNotOptimize(out);
        ++i;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(FeatureExtract);

static void FeatureBatch(benchmark::State& state) {
    const CleanCorpus corpus =
        testsupport::synthetic_pair_corpus(static_cast<int>(state.range(0)),
                                           static_cast<int>(state.range(0)) / 2, Country::ROM, 2);
    for (auto _ : state) {
        const LabeledDataset ds = extract_batch(corpus, Country::ROM);
        benchmark::DoNotOptimize(ds.x.values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 3 / 2);
}
BENCHMARK(FeatureBatch)->Arg(1000)->Arg(4000);
