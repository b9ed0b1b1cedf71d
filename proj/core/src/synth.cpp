#include "causalcast/synth.hpp"

#include <algorithm>
#include <cmath>

#include "causalcast/rng.hpp"

namespace causalcast {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double quantile_of_sorted(const std::vector<double>& sorted, double tau) {
    const std::size_t n = sorted.size();
    double pos = tau * static_cast<double>(n - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    double v = sorted[lo];
    if (lo + 1 < n) v += frac * (sorted[lo + 1] - sorted[lo]);
    return v;
}

double apply_effect(double v, const EffectSpec& e, double threshold) {
    switch (e.kind) {
        case EffectKind::none:
            return v;
        case EffectKind::uniform_multiplicative:
            return e.factor * v;
        case EffectKind::trough_additive:
            return v < threshold ? v + e.delta : v;
        case EffectKind::peak_additive:
            return v > threshold ? v + e.delta : v;
    }
    return v;
}

}  // namespace

void SynthConfig::validate() const {
    if (n_treated < 1 || n_control < 1)
        throw ConfigError("synth: need at least one treated and one control unit");
    if (length < 4) throw ConfigError("synth: length too short");
    if (!(t0_index > 0 && t0_index + 1 < length))
        throw ConfigError("synth: t0_index must lie strictly inside the series");
    if (season < 1) throw ConfigError("synth: season must be >= 1");
    if (noise_sigma < 0.0) throw ConfigError("synth: noise sigma must be >= 0");
    if (step_seconds <= 0) throw ConfigError("synth: step must be positive");
    if (effect.kind == EffectKind::trough_additive || effect.kind == EffectKind::peak_additive)
        if (!(effect.tau_star > 0.0 && effect.tau_star < 1.0))
            throw ConfigError("synth: effect tau_star must be in (0,1)");
}

std::pair<Panel, GroundTruth> generate_panel(const SynthConfig& cfg) {
    cfg.validate();
    const std::size_t n_units = cfg.n_treated + cfg.n_control;
    auto unit_offset = [&](std::size_t u) {
        if (n_units == 1) return 0.0;
        return cfg.offset_spread *
               (2.0 * static_cast<double>(u) / static_cast<double>(n_units - 1) - 1.0);
    };

    Panel panel;
    panel.step_seconds = cfg.step_seconds;
    panel.t0_index = cfg.t0_index;
    std::int64_t start = parse_iso8601(cfg.start_timestamp);
    panel.timestamps.resize(cfg.length);
    panel.timestamp_labels.resize(cfg.length);
    for (std::size_t t = 0; t < cfg.length; ++t) {
        panel.timestamps[t] = start + static_cast<std::int64_t>(t) * cfg.step_seconds;
        panel.timestamp_labels[t] = render_iso8601(panel.timestamps[t], 0);
    }

    GroundTruth truth;
    truth.effect = cfg.effect;

    for (std::size_t u = 0; u < n_units; ++u) {
        const bool treated = u < cfg.n_treated;
        UnitSeries series;
        series.role = treated ? UnitRole::treated : UnitRole::control;
        series.unit_id = treated ? "treated_" + std::to_string(u + 1)
                                 : "control_" + std::to_string(u - cfg.n_treated + 1);
        series.values.resize(cfg.length);
        Rng rng(derive_seed(cfg.seed, u));
        for (std::size_t t = 0; t < cfg.length; ++t) {
            double v = cfg.base_level + unit_offset(u) +
                       cfg.amplitude * std::sin(kTwoPi * static_cast<double>(t) /
                                                static_cast<double>(cfg.season)) +
                       cfg.slope * static_cast<double>(t) + cfg.noise_sigma * rng.next_normal();
            series.values[t] = v;
        }
        if (treated && cfg.effect.kind != EffectKind::none) {
            double threshold = 0.0;
            if (cfg.effect.kind == EffectKind::trough_additive ||
                cfg.effect.kind == EffectKind::peak_additive) {
                std::vector<double> pre(series.values.begin(),
                                        series.values.begin() +
                                            static_cast<std::ptrdiff_t>(cfg.t0_index + 1));
                std::sort(pre.begin(), pre.end());
                double tau = cfg.effect.kind == EffectKind::trough_additive
                                 ? cfg.effect.tau_star
                                 : 1.0 - cfg.effect.tau_star;
                threshold = quantile_of_sorted(pre, tau);
                truth.thresholds.push_back(threshold);
            }
            for (std::size_t t = cfg.t0_index + 1; t < cfg.length; ++t)
                series.values[t] = apply_effect(series.values[t], cfg.effect, threshold);
            truth.treated_ids.push_back(series.unit_id);
        } else if (treated) {
            truth.treated_ids.push_back(series.unit_id);
        }
        panel.units.push_back(std::move(series));
    }
    panel.validate();
    return {std::move(panel), std::move(truth)};
}

std::vector<double> oracle_quantile_effect(const SynthConfig& cfg,
                                           const std::vector<double>& tau_grid,
                                           std::size_t draws) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, 0x0AC1E));
    const std::size_t post_len = cfg.length - (cfg.t0_index + 1);

    // Thresholds come from the pre-period law per treated unit, mirroring
    // the generator's empirical rule.
    std::vector<double> thresholds(cfg.n_treated, 0.0);
    if (cfg.effect.kind == EffectKind::trough_additive ||
        cfg.effect.kind == EffectKind::peak_additive) {
        const std::size_t pre_draws = std::max<std::size_t>(draws / 4, 10000);
        auto unit_offset = [&](std::size_t u) {
            const std::size_t n_units = cfg.n_treated + cfg.n_control;
            if (n_units == 1) return 0.0;
            return cfg.offset_spread *
                   (2.0 * static_cast<double>(u) / static_cast<double>(n_units - 1) - 1.0);
        };
        for (std::size_t u = 0; u < cfg.n_treated; ++u) {
            std::vector<double> sims(pre_draws);
            for (std::size_t i = 0; i < pre_draws; ++i) {
                double t = static_cast<double>(rng.next_index(cfg.t0_index + 1));
                sims[i] = cfg.base_level + unit_offset(u) +
                          cfg.amplitude * std::sin(kTwoPi * t / static_cast<double>(cfg.season)) +
                          cfg.slope * t + cfg.noise_sigma * rng.next_normal();
            }
            std::sort(sims.begin(), sims.end());
            double tau = cfg.effect.kind == EffectKind::trough_additive ? cfg.effect.tau_star
                                                                        : 1.0 - cfg.effect.tau_star;
            thresholds[u] = quantile_of_sorted(sims, tau);
        }
    }

    std::vector<double> clean(draws), affected(draws);
    const std::size_t n_units = cfg.n_treated + cfg.n_control;
    for (std::size_t i = 0; i < draws; ++i) {
        std::size_t u = static_cast<std::size_t>(rng.next_index(cfg.n_treated));
        double offset = 0.0;
        if (n_units > 1)
            offset = cfg.offset_spread *
                     (2.0 * static_cast<double>(u) / static_cast<double>(n_units - 1) - 1.0);
        double t = static_cast<double>(cfg.t0_index + 1 + rng.next_index(post_len));
        double v = cfg.base_level + offset +
                   cfg.amplitude * std::sin(kTwoPi * t / static_cast<double>(cfg.season)) +
                   cfg.slope * t + cfg.noise_sigma * rng.next_normal();
        clean[i] = v;
        affected[i] = apply_effect(v, cfg.effect, thresholds[u]);
    }
    std::sort(clean.begin(), clean.end());
    std::sort(affected.begin(), affected.end());

    std::vector<double> effect(tau_grid.size());
    for (std::size_t q = 0; q < tau_grid.size(); ++q)
        effect[q] = quantile_of_sorted(affected, tau_grid[q]) -
                    quantile_of_sorted(clean, tau_grid[q]);
    return effect;
}

}  // namespace causalcast
