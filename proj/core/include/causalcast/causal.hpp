#ifndef CAUSALCAST_CAUSAL_HPP
#define CAUSALCAST_CAUSAL_HPP

#include <string>
#include <vector>

#include "causalcast/metrics.hpp"
#include "causalcast/panel.hpp"
#include "causalcast/probnet.hpp"

namespace causalcast {

// Sample construction for the signed-rank hypothesis test.
enum class EffectTestMode {
    median_series,  // per-step observed-minus-median-counterfactual gaps
    quantile_ate    // the Q per-quantile average effects
};

struct EffectOptions {
    // Pooled mode quantiles all post-period values (observed, and all
    // counterfactual samples) before differencing; fan mode averages
    // per-step gaps against the quantile fan instead.
    bool pooled = true;
    EffectTestMode test_mode = EffectTestMode::median_series;
};

struct EffectReport {
    std::string unit_id;
    std::vector<double> tau;
    std::vector<double> avg_causal_effect;  // delta^(tau), load units
    std::vector<double> pct_change;         // 100 * delta / counterfactual quantile
    std::vector<double> observed_q;         // pooled observed post quantiles
    std::vector<double> counterfactual_q;   // pooled counterfactual quantiles
    double overall_ate = 0.0;
    double p_signed_rank = 0.0;
    double p_rank_sum = 0.0;  // vs the pooled gaps of the opposite role
    std::size_t n_post = 0;
};

// Per-step effect paths: delta_t^(tau) = observed_t - fan(tau, t).
Matrix per_quantile_effect(const std::vector<double>& observed_post,
                           const ForecastDistribution& counterfactual);

// Time average per quantile (rows of the effect-path matrix).
std::vector<double> ate_per_quantile(const Matrix& effect_paths);

// Unweighted mean over the per-quantile ATEs.
double overall_ate(const std::vector<double>& quantile_ates);

double pct_change(double effect, double counterfactual_quantile);

// Empirical quantiles of a value pool at the given grid.
std::vector<double> pooled_quantiles(std::vector<double> values,
                                     const std::vector<double>& tau_grid);

// Observed-minus-median-counterfactual series (median taken from the
// sample paths, independent of the tau grid).
std::vector<double> median_gap_series(const std::vector<double>& observed_post,
                                      const ForecastDistribution& counterfactual);

// Effect report for one unit given its counterfactual forecast; fills
// everything except p_rank_sum, which needs the opposite group's gaps.
EffectReport make_effect_report(const std::string& unit_id,
                                const std::vector<double>& observed_post,
                                const ForecastDistribution& counterfactual,
                                const EffectOptions& options);

struct BacktestRow {
    std::string unit_id;
    std::string method;
    double wape = 0.0;
    double wrmspe = 0.0;
    double msis = 0.0;
    double crps = 0.0;
};

struct AnalysisConfig {
    std::vector<double> tau_grid;
    std::size_t n_samples = 500;
    std::uint64_t seed = 1;
    MetricConfig metrics;
    EffectOptions effect;
    std::vector<std::string> backtest_methods{"probnet", "seasonal_naive", "ets", "ffnn"};
    int threads = 1;
};

struct UnitForecast {
    std::string unit_id;
    bool is_treated = false;
    ForecastDistribution dist;
    std::vector<double> median_gap;       // observed minus counterfactual median
    std::vector<double> pre_observed_q;   // pooled pre-period quantiles
    std::vector<double> post_observed_q;  // pooled post-period quantiles
};

struct AnalysisBundle {
    std::vector<BacktestRow> control_backtest;
    std::vector<EffectReport> treated;
    std::vector<EffectReport> placebo;  // controls run through the same estimator
    std::vector<UnitForecast> forecasts;
    std::size_t horizon = 0;
};

// Control units pushed through the effect estimator; a null result here is
// the placebo evidence that the counterfactual model is trustworthy.
std::vector<EffectReport> placebo_run(const ModelArtifact& model, const Panel& panel,
                                      const AnalysisConfig& cfg);

// Control-unit error table, treated-unit effect reports, placebo reports.
AnalysisBundle full_analysis(const Panel& panel, const ModelArtifact& model,
                             const AnalysisConfig& cfg);

}  // namespace causalcast

#endif
