#ifndef CAUSALCAST_LSTM_HPP
#define CAUSALCAST_LSTM_HPP

#include <cstddef>
#include <vector>

#include "causalcast/common.hpp"

namespace causalcast {

// Gate order everywhere: input, forget, candidate, output.
// W is [4H x in_dim] row-major, U is [4H x H], b is [4H].

double sigmoid(double x);

struct LstmStateLayer {
    std::vector<double> h;
    std::vector<double> c;
};

// One cell step. gates receives post-activation values (i, f, g, o),
// tanh_c_out receives tanh(c_out); both are what the backward step needs.
void lstm_cell_forward(const double* x, std::size_t in_dim, const double* h_prev,
                       const double* c_prev, std::size_t hidden, const double* W,
                       const double* U, const double* b, double* gates, double* c_out,
                       double* h_out, double* tanh_c_out);

// Convenience overload matching the (x, state, params) shape used by tests.
LstmStateLayer lstm_cell_forward(const std::vector<double>& x, const LstmStateLayer& state,
                                 const std::vector<double>& W, const std::vector<double>& U,
                                 const std::vector<double>& b);

// Reverse-mode step. dh/dc are the gradients flowing into (h_out, c_out);
// writes dx, dh_prev, dc_prev and accumulates into dW/dU/db.
void lstm_cell_backward(const double* x, std::size_t in_dim, const double* h_prev,
                        const double* c_prev, std::size_t hidden, const double* W,
                        const double* U, const double* gates, const double* c_out,
                        const double* tanh_c, const double* dh, const double* dc, double* dx,
                        double* dh_prev, double* dc_prev, double* dW, double* dU, double* db);

}  // namespace causalcast

#endif
