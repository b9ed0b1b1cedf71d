#include "causalcast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "causalcast/rng.hpp"

namespace causalcast {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write '" + path + "'");
    return out;
}

void write_stamp(std::ofstream& out, const Config& cfg) {
    out << "# config_hash=" << cfg.hash() << " seed=" << cfg.get_u64("train.seed", 1) << "\n";
}

std::string fmt(double v) { return format_double(v); }

json report_to_json(const EffectReport& r) {
    json j;
    j["unit_id"] = r.unit_id;
    j["tau"] = r.tau;
    j["avg_causal_effect"] = r.avg_causal_effect;
    j["pct_change"] = r.pct_change;
    j["observed_q"] = r.observed_q;
    j["counterfactual_q"] = r.counterfactual_q;
    j["overall_ate"] = r.overall_ate;
    j["p_signed_rank"] = r.p_signed_rank;
    j["p_rank_sum"] = r.p_rank_sum;
    j["n_post"] = r.n_post;
    return j;
}

EffectReport report_from_json(const json& j) {
    EffectReport r;
    r.unit_id = j.at("unit_id").get<std::string>();
    r.tau = j.at("tau").get<std::vector<double>>();
    r.avg_causal_effect = j.at("avg_causal_effect").get<std::vector<double>>();
    r.pct_change = j.at("pct_change").get<std::vector<double>>();
    r.observed_q = j.at("observed_q").get<std::vector<double>>();
    r.counterfactual_q = j.at("counterfactual_q").get<std::vector<double>>();
    r.overall_ate = j.at("overall_ate").get<double>();
    r.p_signed_rank = j.at("p_signed_rank").get<double>();
    r.p_rank_sum = j.at("p_rank_sum").is_null() ? std::nan("") : j.at("p_rank_sum").get<double>();
    r.n_post = j.at("n_post").get<std::size_t>();
    return r;
}

void write_effect_rows(std::ofstream& out, const EffectReport& r, bool with_verdict,
                       const char* verdict) {
    for (std::size_t q = 0; q < r.tau.size(); ++q) {
        out << r.unit_id << ',' << fmt(r.tau[q]) << ',' << fmt(r.avg_causal_effect[q]) << ','
            << fmt(r.pct_change[q]) << ",,";
        if (with_verdict) out << ',';
        out << '\n';
    }
    out << r.unit_id << ",overall," << fmt(r.overall_ate) << ",," << fmt(r.p_signed_rank) << ','
        << (std::isnan(r.p_rank_sum) ? std::string() : fmt(r.p_rank_sum));
    if (with_verdict) out << ',' << verdict;
    out << '\n';
}

}  // namespace

SchemaConfig schema_from_config(const Config& cfg) {
    SchemaConfig schema;
    schema.t0 = cfg.require_string("data.t0");
    schema.treated = cfg.get_list("data.treated");
    schema.control = cfg.get_list("data.control");
    if (schema.treated.empty() || schema.control.empty())
        throw ConfigError("data.treated and data.control must both name units");
    if (cfg.has("data.step")) schema.step_seconds = parse_step(cfg.require_string("data.step"));
    std::string gap = cfg.get_string("data.gap_policy", "fail");
    if (gap == "fail")
        schema.gap_policy = GapPolicy::fail;
    else if (gap == "linear")
        schema.gap_policy = GapPolicy::linear;
    else
        throw ConfigError("data.gap_policy must be fail or linear");
    schema.max_gap_steps = static_cast<int>(cfg.get_int("data.max_gap", 3));
    return schema;
}

Panel panel_from_config(const Config& cfg, const std::string& panel_override) {
    std::string path = panel_override.empty() ? cfg.require_string("data.path") : panel_override;
    return load_panel(path, schema_from_config(cfg));
}

std::vector<double> tau_grid_from_config(const Config& cfg) {
    if (!cfg.has("forecast.tau_grid")) return default_tau_grid();
    auto grid = cfg.get_double_list("forecast.tau_grid");
    if (grid.empty()) throw ConfigError("forecast.tau_grid is empty");
    return grid;
}

TrainPlan train_plan_from_config(const Config& cfg, const Panel& panel) {
    TrainPlan plan;
    const std::size_t post_len = panel.horizon();
    const std::size_t pre_len = panel.t0_index + 1;

    std::string horizon_key = cfg.get_string("model.horizon", "auto");
    plan.horizon = horizon_key == "auto" ? post_len
                                         : static_cast<std::size_t>(cfg.get_int("model.horizon", 0));
    if (plan.horizon == 0) throw ConfigError("model.horizon resolved to zero");

    std::string context_key = cfg.get_string("model.context_len", "auto");
    if (context_key == "auto")
        plan.context_len = plan.horizon;
    else if (context_key == "paper")
        plan.context_len = std::max<std::size_t>(1, plan.horizon / 4);
    else
        plan.context_len = static_cast<std::size_t>(cfg.get_int("model.context_len", 0));
    if (plan.context_len == 0) throw ConfigError("model.context_len resolved to zero");

    std::string stride_key = cfg.get_string("train.stride", "auto");
    if (stride_key == "auto") {
        const std::size_t target = cfg.get_u64("train.target_windows", 64);
        plan.stride = auto_stride(pre_len, plan.context_len + plan.horizon, target);
    } else {
        plan.stride = cfg.get_u64("train.stride", 1);
    }

    TrainConfig& t = plan.train;
    t.epochs = cfg.get_u64("train.epochs", 50);
    t.batch_size = cfg.get_u64("train.batch", 64);
    t.learning_rate = cfg.get_double("train.lr", 1e-3);
    t.grad_clip_norm = cfg.get_double("train.clip", 10.0);
    t.rng_seed = cfg.get_u64("train.seed", 1);
    t.context_len = plan.context_len;
    t.horizon = plan.horizon;
    t.hidden = cfg.get_u64("model.hidden", 25);
    t.threads = static_cast<int>(cfg.get_int("run.threads", 1));
    std::string kind = cfg.get_string("model.kind", "probnet");
    if (kind == "probnet")
        t.head_type = HeadType::student_t;
    else if (kind == "rnn")
        t.head_type = HeadType::gaussian;
    else
        throw ConfigError("model.kind must be probnet or rnn");
    return plan;
}

AnalysisConfig analysis_config_from(const Config& cfg) {
    AnalysisConfig a;
    a.tau_grid = tau_grid_from_config(cfg);
    a.n_samples = cfg.get_u64("forecast.n_samples", 500);
    a.seed = cfg.get_u64("train.seed", 1);
    a.metrics.alpha = cfg.get_double("metrics.alpha", 0.05);
    a.metrics.season = cfg.get_u64("metrics.seasonality", 24);
    a.metrics.crps_grid = cfg.get_u64("metrics.crps_grid", 99);
    a.metrics.validate();
    std::string mode = cfg.get_string("test.mode", "median_series");
    if (mode == "median_series")
        a.effect.test_mode = EffectTestMode::median_series;
    else if (mode == "quantile_ate")
        a.effect.test_mode = EffectTestMode::quantile_ate;
    else
        throw ConfigError("test.mode must be median_series or quantile_ate");
    a.effect.pooled = cfg.get_bool("effect.pooled", true);
    if (cfg.has("backtest.methods")) a.backtest_methods = cfg.get_list("backtest.methods");
    a.threads = static_cast<int>(cfg.get_int("run.threads", 1));
    return a;
}

SynthConfig synth_from_config(const Config& cfg) {
    SynthConfig s;
    s.n_treated = cfg.get_u64("synth.n_treated", 1);
    s.n_control = cfg.get_u64("synth.n_control", 1);
    s.length = cfg.get_u64("synth.length", 240);
    s.t0_index = cfg.get_u64("synth.t0_index", s.length * 4 / 5);
    s.season = cfg.get_u64("synth.season", 24);
    s.amplitude = cfg.get_double("synth.amplitude", 10.0);
    s.slope = cfg.get_double("synth.slope", 0.0);
    s.noise_sigma = cfg.get_double("synth.noise_sigma", 1.0);
    s.base_level = cfg.get_double("synth.base_level", 100.0);
    s.offset_spread = cfg.get_double("synth.offset_spread", 5.0);
    s.seed = cfg.get_u64("synth.seed", cfg.get_u64("train.seed", 1));
    if (cfg.has("synth.step")) s.step_seconds = parse_step(cfg.require_string("synth.step"));
    s.start_timestamp = cfg.get_string("synth.start", "2020-01-01T00:00:00Z");

    std::string kind = cfg.get_string("synth.effect", "none");
    if (kind == "none")
        s.effect.kind = EffectKind::none;
    else if (kind == "uniform")
        s.effect.kind = EffectKind::uniform_multiplicative;
    else if (kind == "trough")
        s.effect.kind = EffectKind::trough_additive;
    else if (kind == "peak")
        s.effect.kind = EffectKind::peak_additive;
    else
        throw ConfigError("synth.effect must be none, uniform, trough or peak");
    s.effect.factor = cfg.get_double("synth.effect_r", 1.0);
    s.effect.delta = cfg.get_double("synth.effect_d", 0.0);
    s.effect.tau_star = cfg.get_double("synth.effect_tau_star", 0.3);
    return s;
}

void cmd_synth(const Config& cfg, const std::string& out_dir) {
    SynthConfig scfg = synth_from_config(cfg);
    auto [panel, truth] = generate_panel(scfg);

    std::filesystem::create_directories(out_dir);
    const std::string panel_path = out_dir + "/panel.csv";
    write_panel(panel, panel_path);

    json truth_json;
    truth_json["schema"] = "causalcast/ground-truth@1";
    truth_json["config_hash"] = cfg.hash();
    truth_json["seed"] = scfg.seed;
    switch (truth.effect.kind) {
        case EffectKind::none: truth_json["effect"]["kind"] = "none"; break;
        case EffectKind::uniform_multiplicative:
            truth_json["effect"]["kind"] = "uniform";
            break;
        case EffectKind::trough_additive: truth_json["effect"]["kind"] = "trough"; break;
        case EffectKind::peak_additive: truth_json["effect"]["kind"] = "peak"; break;
    }
    truth_json["effect"]["factor"] = truth.effect.factor;
    truth_json["effect"]["delta"] = truth.effect.delta;
    truth_json["effect"]["tau_star"] = truth.effect.tau_star;
    truth_json["thresholds"] = truth.thresholds;
    truth_json["treated_ids"] = truth.treated_ids;
    truth_json["t0_index"] = panel.t0_index;
    truth_json["t0"] = panel.timestamp_labels[panel.t0_index];
    auto truth_out = open_out(out_dir + "/ground_truth.json");
    truth_out << truth_json.dump(2) << '\n';

    // Ready-made [data] section so downstream commands can point at the
    // generated panel without hand-computing t0.
    auto ini = open_out(out_dir + "/data_section.ini");
    ini << "[data]\n";
    ini << "path = " << panel_path << "\n";
    ini << "t0 = " << panel.timestamp_labels[panel.t0_index] << "\n";
    ini << "treated = ";
    bool first = true;
    for (const auto& u : panel.units)
        if (u.role == UnitRole::treated) {
            if (!first) ini << ",";
            ini << u.unit_id;
            first = false;
        }
    ini << "\ncontrol = ";
    first = true;
    for (const auto& u : panel.units)
        if (u.role == UnitRole::control) {
            if (!first) ini << ",";
            ini << u.unit_id;
            first = false;
        }
    ini << "\nstep = " << panel.step_seconds << "s\n";
}

void cmd_train(const Config& cfg, const std::string& panel_path, const std::string& model_out) {
    Panel panel = panel_from_config(cfg, panel_path);
    auto [pre, post] = split_pre_post(panel);
    (void)post;
    TrainPlan plan = train_plan_from_config(cfg, panel);
    auto windows = make_training_windows(pre, plan.horizon, plan.context_len, plan.stride);
    ModelArtifact model = train(windows, plan.train);
    model.tau_grid = tau_grid_from_config(cfg);
    save_model(model, model_out);

    auto loss_out = open_out(model_out + ".loss.csv");
    write_stamp(loss_out, cfg);
    loss_out << "epoch,mean_nll\n";
    for (std::size_t e = 0; e < model.loss_curve.size(); ++e)
        loss_out << e << ',' << fmt(model.loss_curve[e]) << '\n';
}

void cmd_backtest(const Config& cfg, const std::string& panel_path,
                  const std::string& model_path, const std::string& out_csv) {
    Panel panel = panel_from_config(cfg, panel_path);
    ModelArtifact model = load_model(model_path);
    AnalysisConfig acfg = analysis_config_from(cfg);
    AnalysisBundle bundle = full_analysis(panel, model, acfg);

    auto out = open_out(out_csv);
    write_stamp(out, cfg);
    out << "unit_id,method,wape,wrmspe,msis,crps\n";
    for (const auto& row : bundle.control_backtest)
        out << row.unit_id << ',' << row.method << ',' << fmt(row.wape) << ',' << fmt(row.wrmspe)
            << ',' << fmt(row.msis) << ',' << fmt(row.crps) << '\n';
}

namespace {

json bundle_to_json(const Config& cfg, const Panel& panel, const AnalysisBundle& bundle,
                    const AnalysisConfig& acfg) {
    json j;
    j["schema"] = "causalcast/effect-bundle@1";
    j["config_hash"] = cfg.hash();
    j["seed"] = acfg.seed;
    j["t0"] = panel.timestamp_labels[panel.t0_index];
    j["t0_index"] = panel.t0_index;
    j["horizon"] = bundle.horizon;
    j["tau_grid"] = acfg.tau_grid;
    json units = json::array();
    for (std::size_t u = 0; u < bundle.forecasts.size(); ++u) {
        const auto& uf = bundle.forecasts[u];
        json ju;
        ju["unit_id"] = uf.unit_id;
        ju["role"] = uf.is_treated ? "treated" : "control";
        const std::vector<EffectReport>& reports = uf.is_treated ? bundle.treated : bundle.placebo;
        for (const auto& r : reports)
            if (r.unit_id == uf.unit_id) ju["report"] = report_to_json(r);
        json fan = json::array();
        for (std::size_t q = 0; q < uf.dist.quantile_fan.rows; ++q) {
            json row = json::array();
            for (std::size_t t = 0; t < uf.dist.quantile_fan.cols; ++t)
                row.push_back(uf.dist.quantile_fan.at(q, t));
            fan.push_back(std::move(row));
        }
        ju["fan"] = std::move(fan);
        ju["median_gap"] = uf.median_gap;
        ju["pre_observed_q"] = uf.pre_observed_q;
        ju["post_observed_q"] = uf.post_observed_q;
        units.push_back(std::move(ju));
    }
    j["units"] = std::move(units);
    return j;
}

}  // namespace

void cmd_effect(const Config& cfg, const std::string& panel_path, const std::string& model_path,
                const std::string& out_dir) {
    Panel panel = panel_from_config(cfg, panel_path);
    ModelArtifact model = load_model(model_path);
    AnalysisConfig acfg = analysis_config_from(cfg);
    acfg.backtest_methods.clear();  // effect reports only
    AnalysisBundle bundle = full_analysis(panel, model, acfg);

    std::filesystem::create_directories(out_dir);
    auto out = open_out(out_dir + "/effect_report.csv");
    write_stamp(out, cfg);
    out << "unit_id,tau,avg_causal_effect,pct_change,p_signed_rank,p_rank_sum\n";
    for (const auto& r : bundle.treated) write_effect_rows(out, r, false, "");

    auto bundle_out = open_out(out_dir + "/effect_bundle.json");
    bundle_out << bundle_to_json(cfg, panel, bundle, acfg).dump(2) << '\n';
}

void cmd_placebo(const Config& cfg, const std::string& panel_path,
                 const std::string& model_path, const std::string& out_csv) {
    Panel panel = panel_from_config(cfg, panel_path);
    ModelArtifact model = load_model(model_path);
    AnalysisConfig acfg = analysis_config_from(cfg);
    acfg.backtest_methods.clear();
    AnalysisBundle bundle = full_analysis(panel, model, acfg);

    auto out = open_out(out_csv);
    write_stamp(out, cfg);
    out << "unit_id,tau,avg_causal_effect,pct_change,p_signed_rank,p_rank_sum,verdict\n";
    std::size_t passed = 0;
    for (const auto& r : bundle.placebo) {
        // Null effect on the control and a clear separation from the
        // treated gap distribution.
        bool pass = r.p_signed_rank >= 0.05 && r.p_rank_sum < 0.05;
        passed += pass ? 1u : 0u;
        write_effect_rows(out, r, true, pass ? "pass" : "fail");
    }
    std::printf("placebo: %zu/%zu control units pass\n", passed, bundle.placebo.size());
}

void cmd_plotdata(const std::string& bundle_path, const std::string& out_dir) {
    std::ifstream in(bundle_path);
    if (!in) throw IngestError("cannot open '" + bundle_path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IngestError("bad effect bundle '" + bundle_path + "': " + e.what());
    }
    if (j.value("schema", "") != "causalcast/effect-bundle@1")
        throw IngestError("'" + bundle_path + "' is not an effect bundle");

    std::filesystem::create_directories(out_dir);
    const std::string stamp = "# config_hash=" + j.value("config_hash", std::string("?")) +
                              " seed=" + std::to_string(j.value("seed", 0ULL)) + "\n";
    std::vector<double> tau_grid = j.at("tau_grid").get<std::vector<double>>();

    auto fan_out = open_out(out_dir + "/quantile_fan.csv");
    fan_out << stamp << "unit_id,step,tau,value\n";
    auto dist_out = open_out(out_dir + "/quantile_distribution.csv");
    dist_out << stamp << "unit_id,tau,pre_observed,post_observed,counterfactual\n";
    auto box_out = open_out(out_dir + "/effect_boxplot.csv");
    box_out << stamp << "unit_id,min,q1,median,q3,max\n";

    for (const auto& ju : j.at("units")) {
        const std::string unit = ju.at("unit_id").get<std::string>();
        const auto fan = ju.at("fan").get<std::vector<std::vector<double>>>();
        for (std::size_t q = 0; q < fan.size(); ++q)
            for (std::size_t t = 0; t < fan[q].size(); ++t)
                fan_out << unit << ',' << t << ',' << fmt(tau_grid[q]) << ',' << fmt(fan[q][t])
                        << '\n';

        const auto pre_q = ju.at("pre_observed_q").get<std::vector<double>>();
        const auto post_q = ju.at("post_observed_q").get<std::vector<double>>();
        const auto report = report_from_json(ju.at("report"));
        for (std::size_t q = 0; q < tau_grid.size(); ++q)
            dist_out << unit << ',' << fmt(tau_grid[q]) << ',' << fmt(pre_q[q]) << ','
                     << fmt(post_q[q]) << ',' << fmt(report.counterfactual_q[q]) << '\n';

        auto gap = ju.at("median_gap").get<std::vector<double>>();
        auto box = pooled_quantiles(gap, {0.25, 0.5, 0.75});
        double lo = *std::min_element(gap.begin(), gap.end());
        double hi = *std::max_element(gap.begin(), gap.end());
        box_out << unit << ',' << fmt(lo) << ',' << fmt(box[0]) << ',' << fmt(box[1]) << ','
                << fmt(box[2]) << ',' << fmt(hi) << '\n';
    }
}

}  // namespace causalcast
