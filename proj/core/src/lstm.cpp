#include "causalcast/lstm.hpp"

#include <cmath>

namespace causalcast {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

void lstm_cell_forward(const double* x, std::size_t in_dim, const double* h_prev,
                       const double* c_prev, std::size_t hidden, const double* W,
                       const double* U, const double* b, double* gates, double* c_out,
                       double* h_out, double* tanh_c_out) {
    const std::size_t H = hidden;
    const std::size_t rows = 4 * H;
    // pre-activations into gates, then squash in place
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* wr = W + r * in_dim;
        for (std::size_t k = 0; k < in_dim; ++k) acc += wr[k] * x[k];
        const double* ur = U + r * H;
        for (std::size_t k = 0; k < H; ++k) acc += ur[k] * h_prev[k];
        gates[r] = acc;
    }
    double* gi = gates;
    double* gf = gates + H;
    double* gg = gates + 2 * H;
    double* go = gates + 3 * H;
    for (std::size_t j = 0; j < H; ++j) {
        gi[j] = sigmoid(gi[j]);
        gf[j] = sigmoid(gf[j]);
        gg[j] = std::tanh(gg[j]);
        go[j] = sigmoid(go[j]);
        c_out[j] = gf[j] * c_prev[j] + gi[j] * gg[j];
        tanh_c_out[j] = std::tanh(c_out[j]);
        h_out[j] = go[j] * tanh_c_out[j];
    }
}

LstmStateLayer lstm_cell_forward(const std::vector<double>& x, const LstmStateLayer& state,
                                 const std::vector<double>& W, const std::vector<double>& U,
                                 const std::vector<double>& b) {
    const std::size_t H = state.h.size();
    if (state.c.size() != H || b.size() != 4 * H || U.size() != 4 * H * H ||
        W.size() != 4 * H * x.size())
        throw ShapeError("lstm_cell_forward: inconsistent shapes");
    LstmStateLayer out;
    out.h.resize(H);
    out.c.resize(H);
    std::vector<double> gates(4 * H), tanh_c(H);
    lstm_cell_forward(x.data(), x.size(), state.h.data(), state.c.data(), H, W.data(), U.data(),
                      b.data(), gates.data(), out.c.data(), out.h.data(), tanh_c.data());
    return out;
}

void lstm_cell_backward(const double* x, std::size_t in_dim, const double* h_prev,
                        const double* c_prev, std::size_t hidden, const double* W,
                        const double* U, const double* gates, const double* c_out,
                        const double* tanh_c, const double* dh, const double* dc, double* dx,
                        double* dh_prev, double* dc_prev, double* dW, double* dU, double* db) {
    (void)c_out;
    const std::size_t H = hidden;
    const double* gi = gates;
    const double* gf = gates + H;
    const double* gg = gates + 2 * H;
    const double* go = gates + 3 * H;

    // dpre holds gradients w.r.t. the four pre-activation blocks.
    std::vector<double> dpre(4 * H);
    for (std::size_t j = 0; j < H; ++j) {
        double dcj = dc[j] + dh[j] * go[j] * (1.0 - tanh_c[j] * tanh_c[j]);
        double do_ = dh[j] * tanh_c[j];
        double di = dcj * gg[j];
        double df = dcj * c_prev[j];
        double dg = dcj * gi[j];
        dc_prev[j] = dcj * gf[j];
        dpre[j] = di * gi[j] * (1.0 - gi[j]);
        dpre[H + j] = df * gf[j] * (1.0 - gf[j]);
        dpre[2 * H + j] = dg * (1.0 - gg[j] * gg[j]);
        dpre[3 * H + j] = do_ * go[j] * (1.0 - go[j]);
    }

    for (std::size_t k = 0; k < in_dim; ++k) dx[k] = 0.0;
    for (std::size_t k = 0; k < H; ++k) dh_prev[k] = 0.0;
    for (std::size_t r = 0; r < 4 * H; ++r) {
        const double d = dpre[r];
        if (d == 0.0) continue;
        double* dWr = dW + r * in_dim;
        const double* Wr = W + r * in_dim;
        for (std::size_t k = 0; k < in_dim; ++k) {
            dWr[k] += d * x[k];
            dx[k] += Wr[k] * d;
        }
        double* dUr = dU + r * H;
        const double* Ur = U + r * H;
        for (std::size_t k = 0; k < H; ++k) {
            dUr[k] += d * h_prev[k];
            dh_prev[k] += Ur[k] * d;
        }
        db[r] += d;
    }
}

}  // namespace causalcast
