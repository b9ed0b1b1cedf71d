#include <doctest.h>

#include <cmath>

#include "causalcast/probnet.hpp"
#include "causalcast/synth.hpp"

using namespace causalcast;

namespace {

SynthConfig base_config() {
    SynthConfig cfg;
    cfg.n_treated = 2;
    cfg.n_control = 2;
    cfg.length = 200;
    cfg.t0_index = 159;
    cfg.season = 24;
    cfg.amplitude = 10.0;
    cfg.noise_sigma = 1.0;
    cfg.base_level = 100.0;
    cfg.offset_spread = 4.0;
    cfg.seed = 11;
    return cfg;
}

}  // namespace

TEST_CASE("generated panels have the requested shape and roles") {
    auto [panel, truth] = generate_panel(base_config());
    (void)truth;
    CHECK(panel.units.size() == 4);
    CHECK(panel.length() == 200);
    CHECK(panel.t0_index == 159);
    CHECK(panel.unit_indices(UnitRole::treated).size() == 2);
    CHECK(panel.unit_indices(UnitRole::control).size() == 2);
    CHECK(panel.step_seconds == 3600);
    panel.validate();
}

TEST_CASE("same config and seed give identical panels") {
    auto [p1, t1] = generate_panel(base_config());
    auto [p2, t2] = generate_panel(base_config());
    (void)t1;
    (void)t2;
    for (std::size_t u = 0; u < p1.units.size(); ++u)
        CHECK(p1.units[u].values == p2.units[u].values);
}

TEST_CASE("uniform multiplicative effect scales exactly the treated post period") {
    SynthConfig clean_cfg = base_config();
    SynthConfig effect_cfg = clean_cfg;
    effect_cfg.effect.kind = EffectKind::uniform_multiplicative;
    effect_cfg.effect.factor = 0.9;

    auto [clean, tc] = generate_panel(clean_cfg);
    auto [affected, ta] = generate_panel(effect_cfg);
    (void)tc;
    (void)ta;
    for (std::size_t u = 0; u < clean.units.size(); ++u) {
        const bool treated = clean.units[u].role == UnitRole::treated;
        for (std::size_t t = 0; t < clean.length(); ++t) {
            double expected = clean.units[u].values[t];
            if (treated && t > clean.t0_index) expected *= 0.9;
            CHECK(affected.units[u].values[t] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("controls never receive the effect") {
    SynthConfig cfg = base_config();
    cfg.effect.kind = EffectKind::trough_additive;
    cfg.effect.delta = -20.0;
    cfg.effect.tau_star = 0.3;
    auto [clean, t1] = generate_panel(base_config());
    auto [affected, t2] = generate_panel(cfg);
    (void)t1;
    (void)t2;
    for (std::size_t u = 0; u < clean.units.size(); ++u) {
        if (clean.units[u].role != UnitRole::control) continue;
        CHECK(clean.units[u].values == affected.units[u].values);
    }
    // pre-period of treated units is untouched as well
    for (std::size_t u = 0; u < clean.units.size(); ++u)
        for (std::size_t t = 0; t <= clean.t0_index; ++t)
            CHECK(clean.units[u].values[t] == affected.units[u].values[t]);
    CHECK(t2.thresholds.size() == cfg.n_treated);
}

TEST_CASE("oracle reproduces a uniform -10% effect on a flat distribution") {
    SynthConfig cfg;
    cfg.n_treated = 1;
    cfg.n_control = 1;
    cfg.length = 400;
    cfg.t0_index = 299;
    cfg.amplitude = 0.0;
    cfg.noise_sigma = 1.0;
    cfg.base_level = 100.0;
    cfg.offset_spread = 0.0;
    cfg.effect.kind = EffectKind::uniform_multiplicative;
    cfg.effect.factor = 0.9;
    cfg.seed = 21;
    auto effect = oracle_quantile_effect(cfg, {0.5}, 400000);
    CHECK(effect[0] == doctest::Approx(-10.0).epsilon(0.03));
}

TEST_CASE("trough-only effects hit the lower quantiles and spare the upper") {
    SynthConfig cfg = base_config();
    cfg.offset_spread = 0.0;
    cfg.effect.kind = EffectKind::trough_additive;
    cfg.effect.delta = -10.0;
    cfg.effect.tau_star = 0.3;
    auto effect = oracle_quantile_effect(cfg, {0.1, 0.9}, 400000);
    CHECK(effect[0] < -5.0);
    CHECK(std::abs(effect[1]) < 0.5);
}

TEST_CASE("zero effect oracle vanishes at every quantile") {
    SynthConfig cfg = base_config();
    auto effect = oracle_quantile_effect(cfg, default_tau_grid(), 200000);
    for (double d : effect) CHECK(std::abs(d) < 0.2);
}

TEST_CASE("invalid configurations are rejected") {
    SynthConfig cfg = base_config();
    cfg.t0_index = cfg.length - 1;
    CHECK_THROWS_AS(generate_panel(cfg), ConfigError);
    SynthConfig cfg2 = base_config();
    cfg2.n_control = 0;
    CHECK_THROWS_AS(generate_panel(cfg2), ConfigError);
    SynthConfig cfg3 = base_config();
    cfg3.effect.kind = EffectKind::trough_additive;
    cfg3.effect.tau_star = 1.5;
    CHECK_THROWS_AS(generate_panel(cfg3), ConfigError);
}
