#include "causalcast/causal.hpp"

#include <algorithm>
#include <cmath>

#include "causalcast/baselines.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/stats.hpp"

namespace causalcast {

Matrix per_quantile_effect(const std::vector<double>& observed_post,
                           const ForecastDistribution& counterfactual) {
    if (observed_post.size() != counterfactual.horizon)
        throw ShapeError("per_quantile_effect: observed length != forecast horizon");
    const Matrix& fan = counterfactual.quantile_fan;
    Matrix effect(fan.rows, fan.cols);
    for (std::size_t q = 0; q < fan.rows; ++q)
        for (std::size_t t = 0; t < fan.cols; ++t)
            effect.at(q, t) = observed_post[t] - fan.at(q, t);
    return effect;
}

std::vector<double> ate_per_quantile(const Matrix& effect_paths) {
    if (effect_paths.cols == 0) throw ShapeError("ate_per_quantile: empty post period");
    std::vector<double> out(effect_paths.rows, 0.0);
    for (std::size_t q = 0; q < effect_paths.rows; ++q) {
        double acc = 0.0;
        for (std::size_t t = 0; t < effect_paths.cols; ++t) acc += effect_paths.at(q, t);
        out[q] = acc / static_cast<double>(effect_paths.cols);
    }
    return out;
}

double overall_ate(const std::vector<double>& quantile_ates) {
    if (quantile_ates.empty()) throw ShapeError("overall_ate: no quantile effects");
    double acc = 0.0;
    for (double v : quantile_ates) acc += v;
    return acc / static_cast<double>(quantile_ates.size());
}

double pct_change(double effect, double counterfactual_quantile) {
    if (counterfactual_quantile == 0.0)
        throw MetricError("pct_change: zero counterfactual quantile");
    return 100.0 * effect / counterfactual_quantile;
}

std::vector<double> pooled_quantiles(std::vector<double> values,
                                     const std::vector<double>& tau_grid) {
    if (values.size() < 2) throw ShapeError("pooled_quantiles: need at least 2 values");
    std::sort(values.begin(), values.end());
    std::vector<double> out(tau_grid.size());
    const std::size_t n = values.size();
    for (std::size_t q = 0; q < tau_grid.size(); ++q) {
        double pos = tau_grid[q] * static_cast<double>(n - 1);
        std::size_t lo = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(lo);
        double v = values[lo];
        if (lo + 1 < n) v += frac * (values[lo + 1] - values[lo]);
        out[q] = v;
    }
    return out;
}

std::vector<double> median_gap_series(const std::vector<double>& observed_post,
                                      const ForecastDistribution& counterfactual) {
    if (observed_post.size() != counterfactual.horizon)
        throw ShapeError("median_gap_series: observed length != forecast horizon");
    Matrix median = extract_quantiles(counterfactual.sample_paths, {0.5});
    std::vector<double> gap(observed_post.size());
    for (std::size_t t = 0; t < gap.size(); ++t) gap[t] = observed_post[t] - median.at(0, t);
    return gap;
}

EffectReport make_effect_report(const std::string& unit_id,
                                const std::vector<double>& observed_post,
                                const ForecastDistribution& counterfactual,
                                const EffectOptions& options) {
    EffectReport report;
    report.unit_id = unit_id;
    report.tau = counterfactual.tau_grid;
    report.n_post = observed_post.size();
    report.observed_q = pooled_quantiles(observed_post, report.tau);

    std::vector<double> pooled_cf(counterfactual.sample_paths.data);
    report.counterfactual_q = pooled_quantiles(std::move(pooled_cf), report.tau);

    if (options.pooled) {
        report.avg_causal_effect.resize(report.tau.size());
        for (std::size_t q = 0; q < report.tau.size(); ++q)
            report.avg_causal_effect[q] = report.observed_q[q] - report.counterfactual_q[q];
    } else {
        report.avg_causal_effect =
            ate_per_quantile(per_quantile_effect(observed_post, counterfactual));
    }
    report.overall_ate = overall_ate(report.avg_causal_effect);
    report.pct_change.resize(report.tau.size());
    for (std::size_t q = 0; q < report.tau.size(); ++q)
        report.pct_change[q] =
            pct_change(report.avg_causal_effect[q], report.counterfactual_q[q]);

    const std::vector<double> sample =
        options.test_mode == EffectTestMode::median_series
            ? median_gap_series(observed_post, counterfactual)
            : report.avg_causal_effect;
    report.p_signed_rank = wilcoxon_signed_rank(sample).p_value;
    report.p_rank_sum = std::nan("");
    return report;
}

namespace {

struct MethodForecast {
    std::vector<double> point;
    const Matrix* samples = nullptr;  // null for point-only methods
};

BacktestRow score_method(const std::string& unit_id, const std::string& method,
                         const std::vector<double>& actual, const std::vector<double>& pre,
                         const MethodForecast& fc, const AnalysisConfig& cfg) {
    BacktestRow row;
    row.unit_id = unit_id;
    row.method = method;
    row.wape = wape(actual, fc.point);
    row.wrmspe = wrmspe(actual, fc.point);

    std::vector<double> lower, upper;
    Matrix fan;
    std::vector<double> crps_grid = equispaced_tau_grid(cfg.metrics.crps_grid);
    if (fc.samples) {
        const double half = cfg.metrics.alpha / 2.0;
        Matrix bounds = extract_quantiles(*fc.samples, {half, 1.0 - half});
        lower.assign(bounds.row(0), bounds.row(0) + bounds.cols);
        upper.assign(bounds.row(1), bounds.row(1) + bounds.cols);
        fan = extract_quantiles(*fc.samples, crps_grid);
    } else {
        // Point forecasts degrade to zero-width intervals and a
        // point-mass fan.
        lower = fc.point;
        upper = fc.point;
        fan = Matrix(crps_grid.size(), fc.point.size());
        for (std::size_t q = 0; q < fan.rows; ++q)
            for (std::size_t t = 0; t < fan.cols; ++t) fan.at(q, t) = fc.point[t];
    }
    row.msis = msis(actual, lower, upper, pre, cfg.metrics);
    row.crps = crps_mean(actual, fan, crps_grid);
    return row;
}

std::vector<double> median_point(const ForecastDistribution& dist) {
    Matrix med = extract_quantiles(dist.sample_paths, {0.5});
    return std::vector<double>(med.row(0), med.row(0) + med.cols);
}

}  // namespace

AnalysisBundle full_analysis(const Panel& panel, const ModelArtifact& model,
                             const AnalysisConfig& cfg) {
    panel.validate();
    if (cfg.tau_grid.empty()) throw ConfigError("analysis: empty tau grid");
    auto [pre, post] = split_pre_post(panel);
    const std::size_t h = post.length();

    AnalysisBundle bundle;
    bundle.horizon = h;

    ModelArtifact forecaster = model;
    forecaster.tau_grid = cfg.tau_grid;

    // Counterfactual forecast for every unit, treated and control alike.
    std::vector<std::vector<double>> gaps(panel.units.size());
    for (std::size_t u = 0; u < panel.units.size(); ++u) {
        const auto& unit = panel.units[u];
        UnitForecast uf;
        uf.unit_id = unit.unit_id;
        uf.is_treated = unit.role == UnitRole::treated;
        uf.dist = forecast_samples(forecaster, pre.unit_values(u), h, cfg.n_samples,
                                   derive_seed(cfg.seed, 0xF000 + u), unit.unit_id, cfg.threads);
        std::vector<double> observed = post.unit_values(u);
        uf.median_gap = median_gap_series(observed, uf.dist);
        uf.pre_observed_q = pooled_quantiles(pre.unit_values(u), cfg.tau_grid);
        uf.post_observed_q = pooled_quantiles(observed, cfg.tau_grid);
        gaps[u] = uf.median_gap;
        bundle.forecasts.push_back(std::move(uf));
    }

    std::vector<double> pooled_treated_gaps, pooled_control_gaps;
    for (std::size_t u = 0; u < panel.units.size(); ++u) {
        auto& dst = panel.units[u].role == UnitRole::treated ? pooled_treated_gaps
                                                             : pooled_control_gaps;
        dst.insert(dst.end(), gaps[u].begin(), gaps[u].end());
    }

    for (std::size_t u = 0; u < panel.units.size(); ++u) {
        const auto& unit = panel.units[u];
        EffectReport report =
            make_effect_report(unit.unit_id, post.unit_values(u), bundle.forecasts[u].dist,
                               cfg.effect);
        if (unit.role == UnitRole::treated) {
            report.p_rank_sum = rank_sum(gaps[u], pooled_control_gaps).p_value;
            bundle.treated.push_back(std::move(report));
        } else {
            report.p_rank_sum = rank_sum(gaps[u], pooled_treated_gaps).p_value;
            bundle.placebo.push_back(std::move(report));
        }
    }

    // Error baseline over control units only: no true effects there, so
    // forecast error is measurable.
    FfnnModel ffnn;
    bool have_ffnn = false;
    for (const auto& method : cfg.backtest_methods) {
        if (method == "ffnn") {
            const std::size_t context =
                model.cfg.context_len > 0 ? model.cfg.context_len : h;
            const std::size_t stride = auto_stride(pre.length(), context + h);
            auto windows = make_training_windows(pre, h, context, stride);
            TrainConfig fcfg = model.cfg;
            fcfg.context_len = context;
            fcfg.horizon = h;
            ffnn = ffnn_train(windows, fcfg);
            have_ffnn = true;
        }
    }
    for (std::size_t u = 0; u < panel.units.size(); ++u) {
        const auto& unit = panel.units[u];
        if (unit.role != UnitRole::control) continue;
        std::vector<double> actual = post.unit_values(u);
        std::vector<double> pre_values = pre.unit_values(u);
        for (const auto& method : cfg.backtest_methods) {
            MethodForecast fc;
            ForecastDistribution dist;
            if (method == "probnet") {
                fc.point = median_point(bundle.forecasts[u].dist);
                fc.samples = &bundle.forecasts[u].dist.sample_paths;
            } else if (method == "seasonal_naive") {
                fc.point = seasonal_naive(pre_values, cfg.metrics.season, h);
            } else if (method == "ets") {
                EtsState state = ets_fit(pre_values, cfg.metrics.season);
                dist = ets_forecast(state, h, cfg.n_samples, derive_seed(cfg.seed, 0xE75 + u),
                                    cfg.tau_grid, unit.unit_id);
                fc.point = ets_point_forecast(state, h);
                fc.samples = &dist.sample_paths;
            } else if (method == "ffnn") {
                if (!have_ffnn) throw ConfigError("ffnn method requested but not trained");
                dist = ffnn_forecast(ffnn, pre_values, cfg.n_samples,
                                     derive_seed(cfg.seed, 0xFF + u), cfg.tau_grid,
                                     unit.unit_id);
                fc.point = median_point(dist);
                fc.samples = &dist.sample_paths;
            } else {
                throw ConfigError("unknown backtest method '" + method + "'");
            }
            bundle.control_backtest.push_back(
                score_method(unit.unit_id, method, actual, pre_values, fc, cfg));
        }
    }
    return bundle;
}

std::vector<EffectReport> placebo_run(const ModelArtifact& model, const Panel& panel,
                                      const AnalysisConfig& cfg) {
    if (panel.unit_indices(UnitRole::control).empty())
        throw ConfigError("placebo_run: panel has no control units");
    AnalysisConfig quiet = cfg;
    quiet.backtest_methods.clear();
    return full_analysis(panel, model, quiet).placebo;
}

}  // namespace causalcast
