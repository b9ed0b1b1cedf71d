#ifndef CAUSALCAST_ADAM_HPP
#define CAUSALCAST_ADAM_HPP

#include <cstdint>
#include <vector>

namespace causalcast {

// Standard ADAM over a flat parameter vector, with bias correction.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr);

// Scales grads in place so the global L2 norm is at most max_norm.
// Returns the pre-clip norm.
double clip_grad_norm(std::vector<double>& grads, double max_norm);

}  // namespace causalcast

#endif
