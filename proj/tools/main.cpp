#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causalcast/pipeline.hpp"

namespace {

// exit 2: configuration, 3: data, 4: numeric failure
int run_guarded(const std::function<void()>& fn) {
    try {
        fn();
        return 0;
    } catch (const causalcast::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const causalcast::NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 4;
    } catch (const causalcast::MetricError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const causalcast::StatError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const causalcast::IngestError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const causalcast::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

causalcast::Config load_config(const std::string& path, const std::vector<std::string>& sets,
                               int threads) {
    causalcast::Config cfg =
        path.empty() ? causalcast::Config() : causalcast::Config::load(path);
    for (const auto& kv : sets) cfg.apply_override(kv);
    if (threads > 0) cfg.set("run.threads", std::to_string(threads));
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributional causal effect estimation for time-series panels"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> overrides;
    int threads = 0;
    app.add_option("--config,-c", config_path, "config file (key = value sections)")
        ->expected(1);
    app.add_option("--set", overrides, "override a config key, e.g. --set train.epochs=5");
    app.add_option("--threads", threads, "worker thread cap");

    std::string out_dir = "out";
    std::string panel_path, model_path, model_out, out_csv, bundle_path;

    auto* synth = app.add_subcommand("synth", "generate a synthetic panel with ground truth");
    synth->add_option("--out", out_dir, "output directory")->capture_default_str();

    auto* train = app.add_subcommand("train", "train the forecaster on pre-intervention data");
    train->add_option("--panel", panel_path, "panel CSV (overrides data.path)");
    train->add_option("--out", model_out, "model artifact path")->required();

    auto* backtest = app.add_subcommand("backtest", "control-unit error table");
    backtest->add_option("--panel", panel_path, "panel CSV (overrides data.path)");
    backtest->add_option("--model", model_path, "model artifact")->required();
    backtest->add_option("--out", out_csv, "output CSV")->default_val("backtest.csv");

    auto* effect = app.add_subcommand("effect", "treated-unit effect reports");
    effect->add_option("--panel", panel_path, "panel CSV (overrides data.path)");
    effect->add_option("--model", model_path, "model artifact")->required();
    effect->add_option("--out", out_dir, "output directory")->capture_default_str();

    auto* placebo = app.add_subcommand("placebo", "control-unit placebo reports");
    placebo->add_option("--panel", panel_path, "panel CSV (overrides data.path)");
    placebo->add_option("--model", model_path, "model artifact")->required();
    placebo->add_option("--out", out_csv, "output CSV")->default_val("placebo_report.csv");

    auto* plotdata = app.add_subcommand("plotdata", "emit plot-ready CSVs from an effect bundle");
    plotdata->add_option("--report", bundle_path, "effect_bundle.json from the effect command")
        ->required();
    plotdata->add_option("--out", out_dir, "output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    return run_guarded([&]() {
        using namespace causalcast;
        if (synth->parsed()) {
            cmd_synth(load_config(config_path, overrides, threads), out_dir);
        } else if (train->parsed()) {
            cmd_train(load_config(config_path, overrides, threads), panel_path, model_out);
        } else if (backtest->parsed()) {
            cmd_backtest(load_config(config_path, overrides, threads), panel_path, model_path,
                         out_csv);
        } else if (effect->parsed()) {
            cmd_effect(load_config(config_path, overrides, threads), panel_path, model_path,
                       out_dir);
        } else if (placebo->parsed()) {
            cmd_placebo(load_config(config_path, overrides, threads), panel_path, model_path,
                        out_csv);
        } else if (plotdata->parsed()) {
            cmd_plotdata(bundle_path, out_dir);
        }
    });
}
