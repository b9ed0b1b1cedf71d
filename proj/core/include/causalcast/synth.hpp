#ifndef CAUSALCAST_SYNTH_HPP
#define CAUSALCAST_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "causalcast/panel.hpp"

namespace causalcast {

enum class EffectKind { none, uniform_multiplicative, trough_additive, peak_additive };

// Intervention applied to treated units strictly after t0_index.
struct EffectSpec {
    EffectKind kind = EffectKind::none;
    double factor = 1.0;    // uniform multiplicative
    double delta = 0.0;     // additive shift for trough/peak variants
    double tau_star = 0.3;  // quantile threshold selecting troughs/peaks
};

struct SynthConfig {
    std::size_t n_treated = 1;
    std::size_t n_control = 1;
    std::size_t length = 240;
    std::size_t t0_index = 191;
    std::size_t season = 24;
    double amplitude = 10.0;
    double slope = 0.0;
    double noise_sigma = 1.0;
    double base_level = 100.0;
    double offset_spread = 5.0;  // per-unit level offsets span [-spread, spread]
    EffectSpec effect;
    std::uint64_t seed = 1;
    std::int64_t step_seconds = 3600;
    std::string start_timestamp = "2020-01-01T00:00:00Z";

    void validate() const;
};

struct GroundTruth {
    EffectSpec effect;
    // Trough/peak threshold per treated unit (empirical tau_star quantile
    // of that unit's pre-period values); empty otherwise.
    std::vector<double> thresholds;
    std::vector<std::string> treated_ids;
};

// base + amplitude*sin(2*pi*t/S) + slope*t + unit offset + Gaussian noise,
// with the effect spec applied to treated units after t0.
std::pair<Panel, GroundTruth> generate_panel(const SynthConfig& cfg);

// Monte-Carlo estimate of the true per-quantile effect on the pooled
// post-period distribution. Brute-force arbiter for the causal estimates.
std::vector<double> oracle_quantile_effect(const SynthConfig& cfg,
                                           const std::vector<double>& tau_grid,
                                           std::size_t draws = 1000000);

}  // namespace causalcast

#endif
