#include <doctest.h>

#include <cmath>

#include "causalcast/causal.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/synth.hpp"

using namespace causalcast;

namespace {

ForecastDistribution constant_forecast(double level, std::size_t horizon,
                                       std::size_t n_samples = 32) {
    ForecastDistribution dist;
    dist.unit_id = "u";
    dist.horizon = horizon;
    dist.tau_grid = default_tau_grid();
    dist.sample_paths = Matrix(n_samples, horizon, level);
    dist.quantile_fan = extract_quantiles(dist.sample_paths, dist.tau_grid);
    return dist;
}

ModelArtifact iid_sampler_model(double mu_scaled, double sigma_raw, std::size_t context_len) {
    // Zero recurrent weights make the network emit one fixed distribution
    // per step; handy as a known-law sampler.
    NetworkParams p = NetworkParams::init(NetworkDims{1, 4, 2}, HeadType::student_t, 1);
    for (double& v : p.flat) v = 0.0;
    p.flat[p.head_b_offset() + 0] = mu_scaled;
    p.flat[p.head_b_offset() + 1] = sigma_raw;
    p.flat[p.head_b_offset() + 2] = 8.0;  // nu ~ 10, light tails
    ModelArtifact model;
    model.params = p;
    model.cfg.context_len = context_len;
    model.cfg.epochs = 3;
    model.cfg.hidden = 4;
    model.tau_grid = default_tau_grid();
    return model;
}

}  // namespace

TEST_CASE("per-quantile effects subtract the counterfactual fan") {
    auto dist = constant_forecast(100.0, 5);
    std::vector<double> observed(5, 90.0);
    Matrix eff = per_quantile_effect(observed, dist);
    CHECK(eff.rows == dist.tau_grid.size());
    CHECK(eff.cols == 5);
    for (double v : eff.data) CHECK(v == doctest::Approx(-10.0));

    std::vector<double> matched(5, 100.0);
    Matrix null_eff = per_quantile_effect(matched, dist);
    for (double v : null_eff.data) CHECK(v == doctest::Approx(0.0));

    CHECK_THROWS_AS(per_quantile_effect(std::vector<double>(4, 1.0), dist), ShapeError);
}

TEST_CASE("per-quantile ATE is the time average") {
    Matrix paths(2, 4);
    for (std::size_t t = 0; t < 4; ++t) {
        paths.at(0, t) = 3.0;
        paths.at(1, t) = (t % 2 == 0) ? 1.0 : -1.0;
    }
    auto ates = ate_per_quantile(paths);
    CHECK(ates[0] == doctest::Approx(3.0));
    CHECK(ates[1] == doctest::Approx(0.0));

    Matrix scaled = paths;
    for (double& v : scaled.data) v *= 2.5;
    auto scaled_ates = ate_per_quantile(scaled);
    CHECK(scaled_ates[0] == doctest::Approx(2.5 * ates[0]));
}

TEST_CASE("overall ATE is the plain mean of quantile ATEs") {
    CHECK(overall_ate({-4.0, -6.0}) == doctest::Approx(-5.0));
    CHECK(overall_ate({7.5, 7.5, 7.5}) == doctest::Approx(7.5));
    CHECK(overall_ate({-6.0, -4.0}) == doctest::Approx(overall_ate({-4.0, -6.0})));
    CHECK_THROWS_AS(overall_ate({}), ShapeError);
}

TEST_CASE("pct_change follows the counterfactual-denominator convention") {
    CHECK(pct_change(-10.0, 100.0) == doctest::Approx(-10.0));
    CHECK(pct_change(0.0, 57.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(pct_change(1.0, 0.0), MetricError);

    // Consistency with the published per-quantile effect tables: the
    // counterfactual quantile is the denominator.
    CHECK(std::abs(pct_change(-6906.85, 26128.75) - (-26.43)) < 0.01);
    CHECK(std::abs(pct_change(-12522.03, 19019.5) - (-65.84)) < 0.01);
}

TEST_CASE("effect reports carry sign-coherent percentages") {
    auto dist = constant_forecast(100.0, 64);
    std::vector<double> observed;
    Rng rng(2);
    for (int t = 0; t < 64; ++t) observed.push_back(90.0 + 0.1 * rng.next_normal());
    EffectOptions options;
    EffectReport r = make_effect_report("u", observed, dist, options);
    CHECK(r.tau == default_tau_grid());
    CHECK(r.n_post == 64);
    CHECK(r.overall_ate < 0.0);
    CHECK(r.p_signed_rank < 0.01);
    for (std::size_t q = 0; q < r.tau.size(); ++q) {
        CHECK(r.counterfactual_q[q] == doctest::Approx(100.0));
        CHECK((r.avg_causal_effect[q] < 0) == (r.pct_change[q] < 0));
        CHECK(r.pct_change[q] == doctest::Approx(-10.0).epsilon(0.05));
    }
}

TEST_CASE("quantile-ate test mode uses the per-quantile effects as the sample") {
    auto dist = constant_forecast(100.0, 32);
    std::vector<double> observed(32);
    Rng rng(3);
    for (double& v : observed) v = 88.0 + rng.next_normal();
    EffectOptions options;
    options.test_mode = EffectTestMode::quantile_ate;
    EffectReport r = make_effect_report("u", observed, dist, options);
    // 13 strongly negative effects: smallest achievable two-sided p
    CHECK(r.p_signed_rank == doctest::Approx(2.0 / 8192.0));
}

TEST_CASE("null-effect identity: same-law observations give near-zero ATEs") {
    const std::size_t h = 400;
    ModelArtifact model = iid_sampler_model(0.9, 0.0, 4);
    std::vector<double> history(16, 10.0);
    auto cf = forecast_samples(model, history, h, 600, 1001);

    const std::vector<double> taus{0.25, 0.5, 0.75};
    const std::size_t M = 24;
    std::vector<std::vector<double>> deltas(taus.size());
    for (std::size_t m = 0; m < M; ++m) {
        auto obs_draw = forecast_samples(model, history, h, 2, 5000 + m);
        std::vector<double> observed(obs_draw.sample_paths.row(0),
                                     obs_draw.sample_paths.row(0) + h);
        auto obs_q = pooled_quantiles(observed, taus);
        std::vector<double> pool(cf.sample_paths.data);
        auto cf_q = pooled_quantiles(pool, taus);
        for (std::size_t q = 0; q < taus.size(); ++q)
            deltas[q].push_back(obs_q[q] - cf_q[q]);
    }
    for (std::size_t q = 0; q < taus.size(); ++q) {
        double mean = 0.0;
        for (double d : deltas[q]) mean += d;
        mean /= static_cast<double>(M);
        double var = 0.0;
        for (double d : deltas[q]) var += (d - mean) * (d - mean);
        double sem = std::sqrt(var / static_cast<double>(M - 1) / static_cast<double>(M));
        CHECK(std::abs(mean) <= std::max(3.0 * sem, 0.02));
    }
}

namespace {

Panel small_synth_panel() {
    SynthConfig cfg;
    cfg.n_treated = 1;
    cfg.n_control = 2;
    cfg.length = 160;
    cfg.t0_index = 127;
    cfg.season = 8;
    cfg.amplitude = 6.0;
    cfg.noise_sigma = 0.5;
    cfg.base_level = 50.0;
    cfg.offset_spread = 2.0;
    cfg.seed = 33;
    return generate_panel(cfg).first;
}

}  // namespace

TEST_CASE("full_analysis produces one backtest row per control and method") {
    Panel panel = small_synth_panel();
    ModelArtifact model = iid_sampler_model(0.95, 0.0, 8);
    AnalysisConfig cfg;
    cfg.tau_grid = default_tau_grid();
    cfg.n_samples = 80;
    cfg.seed = 5;
    cfg.metrics.season = 8;
    cfg.backtest_methods = {"probnet", "seasonal_naive", "ets", "ffnn"};

    AnalysisBundle bundle = full_analysis(panel, model, cfg);
    CHECK(bundle.control_backtest.size() == 2 * 4);
    CHECK(bundle.treated.size() == 1);
    CHECK(bundle.placebo.size() == 2);
    CHECK(bundle.forecasts.size() == 3);
    CHECK(bundle.horizon == 32);
    for (const auto& row : bundle.control_backtest) {
        CHECK(std::isfinite(row.wape));
        CHECK(std::isfinite(row.wrmspe));
        CHECK(std::isfinite(row.msis));
        CHECK(std::isfinite(row.crps));
    }
    for (const auto& r : bundle.treated) CHECK(std::isfinite(r.p_rank_sum));
    for (const auto& r : bundle.placebo) CHECK(std::isfinite(r.p_rank_sum));

    // deterministic under a fixed seed
    AnalysisBundle again = full_analysis(panel, model, cfg);
    CHECK(again.treated[0].avg_causal_effect == bundle.treated[0].avg_causal_effect);
    CHECK(again.treated[0].p_signed_rank == doctest::Approx(bundle.treated[0].p_signed_rank));
    for (std::size_t i = 0; i < bundle.control_backtest.size(); ++i) {
        CHECK(again.control_backtest[i].wape == doctest::Approx(bundle.control_backtest[i].wape));
        CHECK(again.control_backtest[i].crps == doctest::Approx(bundle.control_backtest[i].crps));
    }
}

TEST_CASE("unknown backtest methods are rejected") {
    Panel panel = small_synth_panel();
    ModelArtifact model = iid_sampler_model(0.95, 0.0, 8);
    AnalysisConfig cfg;
    cfg.tau_grid = default_tau_grid();
    cfg.n_samples = 16;
    cfg.metrics.season = 8;
    cfg.backtest_methods = {"tbats"};
    CHECK_THROWS_AS(full_analysis(panel, model, cfg), ConfigError);
}

TEST_CASE("placebo_run needs control units") {
    Panel panel = small_synth_panel();
    panel.units[1].role = UnitRole::treated;
    panel.units[2].role = UnitRole::treated;
    ModelArtifact model = iid_sampler_model(0.95, 0.0, 8);
    AnalysisConfig cfg;
    cfg.tau_grid = default_tau_grid();
    CHECK_THROWS_AS(placebo_run(model, panel, cfg), ConfigError);
}
