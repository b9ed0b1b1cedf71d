#include <benchmark/benchmark.h>

#include "causalcast/lstm.hpp"
#include "causalcast/probnet.hpp"
#include "causalcast/rng.hpp"

using namespace causalcast;

namespace {

TrainingWindow bench_window(std::size_t context, std::size_t horizon) {
    Rng rng(7);
    TrainingWindow w;
    w.unit_id = "bench";
    for (std::size_t i = 0; i < context; ++i) w.context.push_back(100.0 + 5.0 * rng.next_normal());
    for (std::size_t i = 0; i < horizon; ++i) w.target.push_back(100.0 + 5.0 * rng.next_normal());
    w.scale = compute_scale(w.context);
    return w;
}

NetworkParams bench_params(std::size_t hidden) {
    NetworkParams p = NetworkParams::init(NetworkDims{1, hidden, 2}, HeadType::student_t, 11);
    Rng rng(13);
    for (double& v : p.flat) v = 0.3 * (2.0 * rng.next_double() - 1.0);
    return p;
}

}  // namespace

static void BM_ForwardLoss(benchmark::State& state) {
    const auto steps = static_cast<std::size_t>(state.range(0));
    TrainingWindow w = bench_window(steps / 2, steps / 2);
    NetworkParams p = bench_params(25);
    for (auto _ : state) {
        Tape tape = forward_loss(w, p);
        benchmark::DoNotOptimize(tape.loss);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_ForwardLoss)->Arg(64)->Arg(256)->Arg(720);

static void BM_ForwardBackward(benchmark::State& state) {
    const auto steps = static_cast<std::size_t>(state.range(0));
    TrainingWindow w = bench_window(steps / 2, steps / 2);
    NetworkParams p = bench_params(25);
    for (auto _ : state) {
        Tape tape = forward_loss(w, p);
        auto grad = backward(tape, p);
        benchmark::DoNotOptimize(grad.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_ForwardBackward)->Arg(64)->Arg(256)->Arg(720);

static void BM_LstmCell(benchmark::State& state) {
    const std::size_t H = static_cast<std::size_t>(state.range(0));
    std::vector<double> W(4 * H, 0.01), U(4 * H * H, 0.01), b(4 * H, 0.0);
    std::vector<double> x{0.5}, h(H, 0.1), c(H, 0.1);
    std::vector<double> gates(4 * H), c_out(H), h_out(H), tanh_c(H);
    for (auto _ : state) {
        lstm_cell_forward(x.data(), 1, h.data(), c.data(), H, W.data(), U.data(), b.data(),
                          gates.data(), c_out.data(), h_out.data(), tanh_c.data());
        benchmark::DoNotOptimize(h_out.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LstmCell)->Arg(25)->Arg(64);

BENCHMARK_MAIN();
