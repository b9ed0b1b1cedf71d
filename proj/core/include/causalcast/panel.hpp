#ifndef CAUSALCAST_PANEL_HPP
#define CAUSALCAST_PANEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalcast/common.hpp"

namespace causalcast {

enum class UnitRole { treated, control };

enum class GapPolicy { fail, linear };

struct UnitSeries {
    std::string unit_id;
    UnitRole role = UnitRole::control;
    std::vector<double> values;
    // Raw value strings as seen on ingest, so write_panel can reproduce
    // the input file exactly. Empty for generated panels.
    std::vector<std::string> raw_values;
    std::string unit_label = "MWh";
};

// Aligned multi-unit panel on a strictly increasing uniform time grid.
// Immutable after construction; t0_index marks the last pre-intervention
// observation.
struct Panel {
    std::vector<UnitSeries> units;
    std::vector<std::int64_t> timestamps;       // epoch seconds, uniform step
    std::vector<std::string> timestamp_labels;  // original ISO-8601 renderings
    std::size_t t0_index = 0;                   // index of last pre-intervention step
    std::int64_t step_seconds = 0;

    std::size_t length() const { return timestamps.size(); }
    std::size_t horizon() const { return length() - (t0_index + 1); }

    const UnitSeries& unit(const std::string& id) const;
    std::vector<std::size_t> unit_indices(UnitRole role) const;

    void validate() const;  // throws on any broken invariant
};

// Non-owning half-open slice [first, last) of a panel's time axis.
struct PanelView {
    const Panel* panel = nullptr;
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t length() const { return last - first; }
    double value(std::size_t unit_index, std::size_t offset) const {
        return panel->units[unit_index].values[first + offset];
    }
    std::vector<double> unit_values(std::size_t unit_index) const;
};

struct SchemaConfig {
    std::string t0;                    // ISO-8601 timestamp of last pre-intervention step
    std::vector<std::string> treated;  // unit ids
    std::vector<std::string> control;
    std::int64_t step_seconds = 0;     // 0 = infer from data
    GapPolicy gap_policy = GapPolicy::fail;
    int max_gap_steps = 3;
};

struct TrainingWindow {
    std::string unit_id;
    std::vector<double> context;
    std::vector<double> target;
    double scale = 1.0;
    // Panel position of the first context element; lets callers attach
    // calendar covariates later. Not part of the wire format.
    std::size_t start_index = 0;
};

// ISO-8601 with offset ("2020-03-01T00:30:00+10:00" or trailing "Z").
std::int64_t parse_iso8601(const std::string& s);
std::string render_iso8601(std::int64_t epoch_seconds, std::int64_t offset_seconds);

// "30m", "1h", "24h", "3600s" -> seconds.
std::int64_t parse_step(const std::string& s);

Panel load_panel(const std::string& csv_path, const SchemaConfig& schema);
void write_panel(const Panel& panel, const std::string& csv_path);

std::pair<PanelView, PanelView> split_pre_post(const Panel& panel);

// scale = 1 + mean(|context|); always >= 1.
double compute_scale(const std::vector<double>& context);

std::vector<TrainingWindow> make_training_windows(const PanelView& pre, std::size_t horizon,
                                                  std::size_t context_len, std::size_t stride);

// Largest stride that still yields roughly target_windows starts per unit;
// 1 when the pre-period is short. Keeps training cost bounded on long
// panels without narrowing the coverage of starting points.
std::size_t auto_stride(std::size_t pre_len, std::size_t window_len,
                        std::size_t target_windows = 64);

// Hour-of-day/day-of-week one-hots for the given panel positions.
// Optional covariates; the forecaster runs purely autoregressive unless
// these are requested.
Matrix calendar_features(const Panel& panel, std::size_t first, std::size_t count);

}  // namespace causalcast

#endif
