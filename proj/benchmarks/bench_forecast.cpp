#include <benchmark/benchmark.h>

#include "causalcast/probnet.hpp"
#include "causalcast/rng.hpp"

using namespace causalcast;

namespace {

ModelArtifact bench_model(std::size_t context_len) {
    NetworkParams p = NetworkParams::init(NetworkDims{1, 25, 2}, HeadType::student_t, 3);
    Rng rng(5);
    for (double& v : p.flat) v = 0.3 * (2.0 * rng.next_double() - 1.0);
    ModelArtifact model;
    model.params = p;
    model.cfg.context_len = context_len;
    model.tau_grid = default_tau_grid();
    return model;
}

}  // namespace

static void BM_ForecastSamples(benchmark::State& state) {
    const auto n_samples = static_cast<std::size_t>(state.range(0));
    ModelArtifact model = bench_model(96);
    Rng rng(9);
    std::vector<double> history;
    for (int i = 0; i < 200; ++i) history.push_back(100.0 + 10.0 * rng.next_normal());
    for (auto _ : state) {
        auto dist = forecast_samples(model, history, 48, n_samples, 77, "bench", 1);
        benchmark::DoNotOptimize(dist.sample_paths.data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n_samples) * 48);
}
BENCHMARK(BM_ForecastSamples)->Arg(50)->Arg(200)->Arg(500);

static void BM_ForecastSamplesThreaded(benchmark::State& state) {
    ModelArtifact model = bench_model(96);
    Rng rng(9);
    std::vector<double> history;
    for (int i = 0; i < 200; ++i) history.push_back(100.0 + 10.0 * rng.next_normal());
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto dist = forecast_samples(model, history, 48, 500, 77, "bench", threads);
        benchmark::DoNotOptimize(dist.sample_paths.data.data());
    }
    state.SetItemsProcessed(state.iterations() * 500 * 48);
}
BENCHMARK(BM_ForecastSamplesThreaded)->Arg(1)->Arg(2)->Arg(4);
