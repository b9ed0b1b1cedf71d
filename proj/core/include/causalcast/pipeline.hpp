#ifndef CAUSALCAST_PIPELINE_HPP
#define CAUSALCAST_PIPELINE_HPP

#include <string>

#include "causalcast/causal.hpp"
#include "causalcast/config.hpp"
#include "causalcast/panel.hpp"
#include "causalcast/probnet.hpp"
#include "causalcast/synth.hpp"

namespace causalcast {

// Command implementations behind the CLI. Each throws on failure; the
// binary maps exception types onto exit codes.

// Generates a synthetic panel plus ground truth. Writes panel.csv,
// ground_truth.json and data_section.ini (ready-made [data] keys) into
// out_dir.
void cmd_synth(const Config& cfg, const std::string& out_dir);

// Trains the configured forecaster on pre-intervention data only and
// writes the model artifact plus a loss-curve CSV next to it.
void cmd_train(const Config& cfg, const std::string& panel_path, const std::string& model_out);

// Control-unit error table across the configured methods.
void cmd_backtest(const Config& cfg, const std::string& panel_path,
                  const std::string& model_path, const std::string& out_csv);

// Treated-unit effect reports; writes effect_report.csv and
// effect_bundle.json into out_dir.
void cmd_effect(const Config& cfg, const std::string& panel_path,
                const std::string& model_path, const std::string& out_dir);

// Control units pushed through the effect estimator, with a pass/fail
// verdict per unit.
void cmd_placebo(const Config& cfg, const std::string& panel_path,
                 const std::string& model_path, const std::string& out_csv);

// Renders plot-ready CSVs (quantile fan, pre/post/counterfactual quantile
// distributions, effect boxplot stats) from an effect bundle.
void cmd_plotdata(const std::string& bundle_path, const std::string& out_dir);

// Shared wiring, exposed for tests.
SchemaConfig schema_from_config(const Config& cfg);
Panel panel_from_config(const Config& cfg, const std::string& panel_override);
SynthConfig synth_from_config(const Config& cfg);
AnalysisConfig analysis_config_from(const Config& cfg);
std::vector<double> tau_grid_from_config(const Config& cfg);

struct TrainPlan {
    TrainConfig train;
    std::size_t context_len = 0;
    std::size_t horizon = 0;
    std::size_t stride = 1;
};
TrainPlan train_plan_from_config(const Config& cfg, const Panel& panel);

}  // namespace causalcast

#endif
