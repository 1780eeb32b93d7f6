#include <benchmark/benchmark.h>

#include <vector>

#include "placenames/rng.hpp"
#include "placenames/stats.hpp"

using namespace placenames;

static void StudentTCdf(benchmark::State& state) {
    double t = -30.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(student_t_cdf(t, 12.5));
        t += 0.01;
        if (t > 30.0) t = -30.0;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(StudentTCdf);

static void MannWhitneyAsymptotic(benchmark::State& state) {
    Rng rng(4);
    std::vector<double> a(state.range(0)), b(state.range(0));
    for (auto& v : a) v = rng.uniform();
    for (auto& v : b) v = rng.uniform() + 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mann_whitney(a, b).p_value);
    }
    state.SetItemsProcessed(state.iterations() * a.size());
}
BENCHMARK(MannWhitneyAsymptotic)->Arg(1000)->Arg(10000);

static void WelchT(benchmark::State& state) {
    Rng rng(4);
    std::vector<double> a(5000), b(3000);
    for (auto& v : a) v = rng.uniform();
    for (auto& v : b) v = rng.uniform() + 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(welch_t(a, b).p_value);
    }
}
BENCHMARK(WelchT);
