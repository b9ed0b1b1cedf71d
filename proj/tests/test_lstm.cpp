#include <doctest.h>

#include <cmath>
#include <vector>

#include "causalcast/lstm.hpp"

using namespace causalcast;

namespace {

LstmStateLayer zero_state(std::size_t H) {
    LstmStateLayer s;
    s.h.assign(H, 0.0);
    s.c.assign(H, 0.0);
    return s;
}

}  // namespace

TEST_CASE("zero weights, zero input, zero cell stay at zero") {
    const std::size_t H = 3;
    std::vector<double> W(4 * H * 1, 0.0), U(4 * H * H, 0.0), b(4 * H, 0.0);
    auto out = lstm_cell_forward({0.0}, zero_state(H), W, U, b);
    for (double v : out.h) CHECK(v == doctest::Approx(0.0));
    for (double v : out.c) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("zero weights with unit cell decay by the half-open forget gate") {
    // gates sigmoid(0) = 0.5, candidate tanh(0) = 0:
    // c' = 0.5 * 1 = 0.5, h' = 0.5 * tanh(0.5)
    const std::size_t H = 1;
    std::vector<double> W(4, 0.0), U(4, 0.0), b(4, 0.0);
    LstmStateLayer s = zero_state(H);
    s.c[0] = 1.0;
    auto out = lstm_cell_forward({0.0}, s, W, U, b);
    CHECK(out.c[0] == doctest::Approx(0.5));
    CHECK(out.h[0] == doctest::Approx(0.5 * std::tanh(0.5)));
    CHECK(out.h[0] == doctest::Approx(0.23105857863).epsilon(1e-9));
}

TEST_CASE("hidden size is preserved regardless of input width") {
    const std::size_t H = 25;
    for (std::size_t in_dim : {1u, 3u, 7u}) {
        std::vector<double> W(4 * H * in_dim, 0.01), U(4 * H * H, 0.01), b(4 * H, 0.0);
        std::vector<double> x(in_dim, 0.5);
        auto out = lstm_cell_forward(x, zero_state(H), W, U, b);
        CHECK(out.h.size() == H);
        CHECK(out.c.size() == H);
    }
}

TEST_CASE("shape mismatches are rejected") {
    std::vector<double> W(4, 0.0), U(4, 0.0), b(4, 0.0);
    LstmStateLayer s = zero_state(1);
    CHECK_THROWS_AS(lstm_cell_forward({0.0, 1.0}, s, W, U, b), ShapeError);
    std::vector<double> bad_b(3, 0.0);
    CHECK_THROWS_AS(lstm_cell_forward({0.0}, s, W, U, bad_b), ShapeError);
}

TEST_CASE("cell backward matches central finite differences") {
    const std::size_t H = 3, in_dim = 2;
    std::vector<double> W(4 * H * in_dim), U(4 * H * H), b(4 * H);
    auto fill = [](std::vector<double>& v, double start) {
        double x = start;
        for (double& e : v) {
            e = std::sin(x) * 0.4;
            x += 0.7;
        }
    };
    fill(W, 0.1);
    fill(U, 0.5);
    fill(b, 0.9);
    std::vector<double> x{0.3, -0.6}, h_prev{0.2, -0.1, 0.4}, c_prev{-0.3, 0.5, 0.1};

    // scalar objective: sum(h') + 0.5 * sum(c')
    auto objective = [&](const std::vector<double>& Wv) {
        std::vector<double> gates(4 * H), c_out(H), h_out(H), tanh_c(H);
        lstm_cell_forward(x.data(), in_dim, h_prev.data(), c_prev.data(), H, Wv.data(), U.data(),
                          b.data(), gates.data(), c_out.data(), h_out.data(), tanh_c.data());
        double acc = 0.0;
        for (std::size_t j = 0; j < H; ++j) acc += h_out[j] + 0.5 * c_out[j];
        return acc;
    };

    std::vector<double> gates(4 * H), c_out(H), h_out(H), tanh_c(H);
    lstm_cell_forward(x.data(), in_dim, h_prev.data(), c_prev.data(), H, W.data(), U.data(),
                      b.data(), gates.data(), c_out.data(), h_out.data(), tanh_c.data());
    std::vector<double> dh(H, 1.0), dc(H, 0.5);
    std::vector<double> dx(in_dim, 0.0), dh_prev(H, 0.0), dc_prev(H, 0.0);
    std::vector<double> dW(W.size(), 0.0), dU(U.size(), 0.0), db(b.size(), 0.0);
    lstm_cell_backward(x.data(), in_dim, h_prev.data(), c_prev.data(), H, W.data(), U.data(),
                       gates.data(), c_out.data(), tanh_c.data(), dh.data(), dc.data(), dx.data(),
                       dh_prev.data(), dc_prev.data(), dW.data(), dU.data(), db.data());

    const double eps = 1e-6;
    for (std::size_t i = 0; i < W.size(); ++i) {
        std::vector<double> Wp = W, Wm = W;
        Wp[i] += eps;
        Wm[i] -= eps;
        double fd = (objective(Wp) - objective(Wm)) / (2 * eps);
        CHECK(dW[i] == doctest::Approx(fd).epsilon(1e-5));
    }
}
