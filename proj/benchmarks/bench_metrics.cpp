#include <benchmark/benchmark.h>

#include "causalcast/causal.hpp"
#include "causalcast/metrics.hpp"
#include "causalcast/probnet.hpp"
#include "causalcast/rng.hpp"

using namespace causalcast;

static void BM_ExtractQuantiles(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    Matrix samples(n, 360);
    for (double& v : samples.data) v = 100.0 + 10.0 * rng.next_normal();
    auto grid = default_tau_grid();
    for (auto _ : state) {
        Matrix fan = extract_quantiles(samples, grid);
        benchmark::DoNotOptimize(fan.data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) * 360);
}
BENCHMARK(BM_ExtractQuantiles)->Arg(100)->Arg(500);

static void BM_CrpsMean(benchmark::State& state) {
    Rng rng(4);
    auto grid = equispaced_tau_grid(99);
    Matrix samples(500, 360);
    for (double& v : samples.data) v = 100.0 + 10.0 * rng.next_normal();
    Matrix fan = extract_quantiles(samples, grid);
    std::vector<double> actuals(360);
    for (double& v : actuals) v = 100.0 + 10.0 * rng.next_normal();
    for (auto _ : state) {
        double score = crps_mean(actuals, fan, grid);
        benchmark::DoNotOptimize(score);
    }
}
BENCHMARK(BM_CrpsMean);

static void BM_PooledQuantiles(benchmark::State& state) {
    Rng rng(5);
    std::vector<double> pool(500 * 360);
    for (double& v : pool) v = rng.next_normal();
    auto grid = default_tau_grid();
    for (auto _ : state) {
        auto q = pooled_quantiles(pool, grid);
        benchmark::DoNotOptimize(q.data());
    }
}
BENCHMARK(BM_PooledQuantiles);
