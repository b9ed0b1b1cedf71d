#ifndef CAUSALCAST_BASELINES_HPP
#define CAUSALCAST_BASELINES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "causalcast/panel.hpp"
#include "causalcast/probnet.hpp"

namespace causalcast {

// forecast[k] repeats the last observed value from the same season.
std::vector<double> seasonal_naive(const std::vector<double>& history, std::size_t season,
                                   std::size_t horizon);

struct EtsSmoothing {
    double alpha = 0.5;
    double beta = 0.0;
    double gamma = 0.0;
};

// Additive Holt-Winters state. Seasonal components are normalised to sum
// to zero when the fit completes.
struct EtsState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> seasonal;  // length S
    EtsSmoothing smoothing;
    std::size_t steps_seen = 0;          // phase of the seasonal index
    std::vector<double> residuals;       // one-step in-sample errors past warm-up
    double in_sample_sse = 0.0;
};

// Fits by grid search over (alpha, beta, gamma) in steps of 0.1 unless
// fixed smoothing parameters are supplied. history must span >= 2 seasons.
EtsState ets_fit(const std::vector<double>& history, std::size_t season,
                 std::optional<EtsSmoothing> fixed = std::nullopt);

std::vector<double> ets_point_forecast(const EtsState& state, std::size_t horizon);

// Point path plus residual-bootstrap sample paths.
ForecastDistribution ets_forecast(const EtsState& state, std::size_t horizon,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const std::vector<double>& tau_grid,
                                  const std::string& unit_id = std::string());

// One-hidden-layer MLP mapping a context window straight to per-step
// Student's t (or Gaussian) parameters for the whole horizon.
struct FfnnModel {
    std::size_t context_len = 0;
    std::size_t horizon = 0;
    std::size_t width = 40;
    HeadType head = HeadType::student_t;
    std::vector<double> flat;  // W1 [width x C], b1 [width], W2 [3h x width], b2 [3h]
    std::vector<double> loss_curve;

    std::size_t w1_offset() const { return 0; }
    std::size_t b1_offset() const { return width * context_len; }
    std::size_t w2_offset() const { return b1_offset() + width; }
    std::size_t b2_offset() const { return w2_offset() + 3 * horizon * width; }
    std::size_t size() const { return b2_offset() + 3 * horizon; }
};

double ffnn_loss(const TrainingWindow& window, const FfnnModel& model);
std::vector<double> ffnn_loss_grad(const TrainingWindow& window, const FfnnModel& model,
                                   double* loss_out = nullptr);

FfnnModel ffnn_train(const std::vector<TrainingWindow>& windows, const TrainConfig& cfg,
                     std::size_t width = 40);

ForecastDistribution ffnn_forecast(const FfnnModel& model, const std::vector<double>& history,
                                   std::size_t n_samples, std::uint64_t seed,
                                   const std::vector<double>& tau_grid,
                                   const std::string& unit_id = std::string());

}  // namespace causalcast

#endif
