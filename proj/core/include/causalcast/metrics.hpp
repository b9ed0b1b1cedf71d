#ifndef CAUSALCAST_METRICS_HPP
#define CAUSALCAST_METRICS_HPP

#include <cstddef>
#include <vector>

#include "causalcast/common.hpp"

namespace causalcast {

struct MetricConfig {
    double alpha = 0.05;        // prediction-interval level
    std::size_t season = 24;    // seasonal period for the MSIS denominator
    std::size_t crps_grid = 99; // equispaced quantiles 0.01..0.99

    void validate() const;
};

// sum |Y - F| / sum Y
double wape(const std::vector<double>& actuals, const std::vector<double>& forecasts);

// sqrt(mean((Y - F)^2)) / mean(Y)
double wrmspe(const std::vector<double>& actuals, const std::vector<double>& forecasts);

// Mean scaled interval score at level alpha, scaled by the in-sample
// seasonal-naive absolute error.
double msis(const std::vector<double>& actuals, const std::vector<double>& lower,
            const std::vector<double>& upper, const std::vector<double>& in_sample,
            const MetricConfig& cfg);

// Quantile-loss approximation of the CRPS: mean over the grid of
// 2 * pinball(tau, y - q_tau). fan_column must be non-decreasing.
double crps(double actual, const std::vector<double>& fan_column,
            const std::vector<double>& tau_grid);

// Average CRPS over the horizon; fan is Q x h.
double crps_mean(const std::vector<double>& actuals, const Matrix& fan,
                 const std::vector<double>& tau_grid);

std::vector<double> equispaced_tau_grid(std::size_t count);

}  // namespace causalcast

#endif
