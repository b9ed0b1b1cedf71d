#include "causalcast/panel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace causalcast {

namespace {

// Days-from-civil / civil-from-days (Howard Hinnant's algorithms).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

int parse_int_field(const std::string& s, std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (i >= s.size() || s[i] < '0' || s[i] > '9')
            throw IngestError("malformed timestamp: '" + s + "'");
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

}  // namespace

std::int64_t parse_iso8601(const std::string& s) {
    // YYYY-MM-DDTHH:MM:SS followed by Z or +HH:MM / -HH:MM.
    if (s.size() < 20 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
        s[13] != ':' || s[16] != ':')
        throw IngestError("malformed timestamp: '" + s + "'");
    int year = parse_int_field(s, 0, 4);
    int month = parse_int_field(s, 5, 2);
    int day = parse_int_field(s, 8, 2);
    int hour = parse_int_field(s, 11, 2);
    int minute = parse_int_field(s, 14, 2);
    int second = parse_int_field(s, 17, 2);
    std::int64_t offset = 0;
    char tz = s[19];
    if (tz == 'Z') {
        if (s.size() != 20) throw IngestError("malformed timestamp: '" + s + "'");
    } else if (tz == '+' || tz == '-') {
        if (s.size() != 25 || s[22] != ':') throw IngestError("malformed timestamp: '" + s + "'");
        offset = parse_int_field(s, 20, 2) * 3600 + parse_int_field(s, 23, 2) * 60;
        if (tz == '-') offset = -offset;
    } else {
        throw IngestError("timestamp missing timezone offset: '" + s + "'");
    }
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        throw IngestError("timestamp field out of range: '" + s + "'");
    std::int64_t days = days_from_civil(year, month, day);
    return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string render_iso8601(std::int64_t epoch_seconds, std::int64_t offset_seconds) {
    std::int64_t local = epoch_seconds + offset_seconds;
    std::int64_t days = local / 86400;
    std::int64_t secs = local % 86400;
    if (secs < 0) {
        secs += 86400;
        days -= 1;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    int hh = static_cast<int>(secs / 3600);
    int mm = static_cast<int>((secs % 3600) / 60);
    int ss = static_cast<int>(secs % 60);
    if (offset_seconds == 0) {
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d, hh, mm, ss);
    } else {
        std::int64_t off = offset_seconds >= 0 ? offset_seconds : -offset_seconds;
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d%c%02d:%02d", y, m, d, hh,
                      mm, ss, offset_seconds >= 0 ? '+' : '-', static_cast<int>(off / 3600),
                      static_cast<int>((off % 3600) / 60));
    }
    return buf;
}

std::int64_t parse_step(const std::string& s) {
    if (s.empty()) throw ConfigError("empty step");
    std::size_t i = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == 0 || i == s.size()) throw ConfigError("bad step: '" + s + "'");
    std::int64_t n = std::stoll(s.substr(0, i));
    std::string unit = s.substr(i);
    if (unit == "s") return n;
    if (unit == "m" || unit == "min") return n * 60;
    if (unit == "h") return n * 3600;
    if (unit == "d") return n * 86400;
    throw ConfigError("bad step unit: '" + s + "'");
}

const UnitSeries& Panel::unit(const std::string& id) const {
    for (const auto& u : units)
        if (u.unit_id == id) return u;
    throw ConfigError("unknown unit '" + id + "'");
}

std::vector<std::size_t> Panel::unit_indices(UnitRole role) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < units.size(); ++i)
        if (units[i].role == role) out.push_back(i);
    return out;
}

void Panel::validate() const {
    const std::size_t T = timestamps.size();
    if (T < 3) throw IngestError("panel needs at least 3 time steps");
    if (units.empty()) throw IngestError("panel has no units");
    if (step_seconds <= 0) throw IngestError("panel step must be positive");
    for (std::size_t t = 1; t < T; ++t)
        if (timestamps[t] - timestamps[t - 1] != step_seconds)
            throw IngestError("timestamps not a uniform grid at index " + std::to_string(t));
    if (!(t0_index > 0 && t0_index + 1 < T))
        throw ConfigError("t0 must lie strictly inside the observation window");
    bool any_treated = false, any_control = false;
    for (const auto& u : units) {
        if (u.values.size() != T)
            throw IngestError("unit '" + u.unit_id + "' length mismatch");
        for (double v : u.values)
            if (!std::isfinite(v))
                throw IngestError("unit '" + u.unit_id + "' has non-finite values");
        any_treated |= u.role == UnitRole::treated;
        any_control |= u.role == UnitRole::control;
    }
    if (!any_treated || !any_control)
        throw ConfigError("panel needs at least one treated and one control unit");
}

std::vector<double> PanelView::unit_values(std::size_t unit_index) const {
    const auto& v = panel->units[unit_index].values;
    return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(first),
                               v.begin() + static_cast<std::ptrdiff_t>(last));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void fill_gaps(UnitSeries& u, std::vector<char>& present, const SchemaConfig& schema) {
    const std::size_t T = u.values.size();
    std::size_t t = 0;
    while (t < T) {
        if (present[t]) {
            ++t;
            continue;
        }
        std::size_t run_end = t;
        while (run_end < T && !present[run_end]) ++run_end;
        const std::size_t run = run_end - t;
        if (schema.gap_policy != GapPolicy::linear)
            throw IngestError("gap: unit '" + u.unit_id + "' missing " + std::to_string(run) +
                              " timestamp(s)");
        if (t == 0 || run_end == T)
            throw IngestError("gap: unit '" + u.unit_id + "' missing values at series boundary");
        if (run > static_cast<std::size_t>(schema.max_gap_steps))
            throw IngestError("gap: unit '" + u.unit_id + "' gap of " + std::to_string(run) +
                              " exceeds limit " + std::to_string(schema.max_gap_steps));
        const double lo = u.values[t - 1];
        const double hi = u.values[run_end];
        for (std::size_t k = 0; k < run; ++k) {
            double frac = static_cast<double>(k + 1) / static_cast<double>(run + 1);
            u.values[t + k] = lo + frac * (hi - lo);
            u.raw_values[t + k] = format_double(u.values[t + k]);
            present[t + k] = 1;
        }
        t = run_end;
    }
}

}  // namespace

Panel load_panel(const std::string& csv_path, const SchemaConfig& schema) {
    std::ifstream in(csv_path);
    if (!in) throw IngestError("cannot open '" + csv_path + "'");

    std::string line;
    if (!std::getline(in, line)) throw IngestError("empty file '" + csv_path + "'");
    // Tolerate a leading comment line before the header.
    if (!line.empty() && line[0] == '#')
        if (!std::getline(in, line)) throw IngestError("missing header in '" + csv_path + "'");
    auto header = split_csv_line(line);
    if (header.size() != 3 || header[0] != "timestamp" || header[1] != "unit_id" ||
        header[2] != "value")
        throw IngestError("expected header 'timestamp,unit_id,value' in '" + csv_path + "'");

    struct Cell {
        double value;
        std::string raw;
    };
    std::map<std::int64_t, std::string> grid;  // epoch -> first-seen label
    std::unordered_map<std::string, std::unordered_map<std::int64_t, Cell>> cells;

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw IngestError(csv_path + ":" + std::to_string(lineno) + ": expected 3 fields");
        std::int64_t ts = parse_iso8601(fields[0]);
        double v = parse_double(fields[2], "value");
        if (!std::isfinite(v))
            throw IngestError(csv_path + ":" + std::to_string(lineno) + ": non-finite value");
        grid.emplace(ts, fields[0]);
        auto [it, inserted] = cells[fields[1]].emplace(ts, Cell{v, fields[2]});
        (void)it;
        if (!inserted)
            throw IngestError("duplicate (timestamp, unit_id) at " + fields[0] + ", " + fields[1]);
    }
    if (grid.empty()) throw IngestError("no data rows in '" + csv_path + "'");

    Panel panel;
    for (const auto& [ts, label] : grid) {
        panel.timestamps.push_back(ts);
        panel.timestamp_labels.push_back(label);
    }
    const std::size_t T = panel.timestamps.size();

    panel.step_seconds = schema.step_seconds;
    if (panel.step_seconds == 0) {
        if (T < 2) throw IngestError("cannot infer step from a single timestamp");
        panel.step_seconds = panel.timestamps[1] - panel.timestamps[0];
    }

    auto add_unit = [&](const std::string& id, UnitRole role) {
        auto it = cells.find(id);
        if (it == cells.end()) throw ConfigError("schema names unit '" + id + "' not in data");
        UnitSeries u;
        u.unit_id = id;
        u.role = role;
        u.values.assign(T, 0.0);
        u.raw_values.assign(T, std::string());
        std::vector<char> present(T, 0);
        for (std::size_t t = 0; t < T; ++t) {
            auto cit = it->second.find(panel.timestamps[t]);
            if (cit != it->second.end()) {
                u.values[t] = cit->second.value;
                u.raw_values[t] = cit->second.raw;
                present[t] = 1;
            }
        }
        fill_gaps(u, present, schema);
        panel.units.push_back(std::move(u));
    };
    for (const auto& id : schema.treated) add_unit(id, UnitRole::treated);
    for (const auto& id : schema.control) add_unit(id, UnitRole::control);

    if (schema.t0.empty()) throw ConfigError("schema missing t0");
    std::int64_t t0_epoch = parse_iso8601(schema.t0);
    auto pos = std::lower_bound(panel.timestamps.begin(), panel.timestamps.end(), t0_epoch);
    if (pos == panel.timestamps.end() || *pos != t0_epoch)
        throw ConfigError("t0 '" + schema.t0 + "' is not a panel timestamp");
    panel.t0_index = static_cast<std::size_t>(pos - panel.timestamps.begin());

    panel.validate();
    return panel;
}

void write_panel(const Panel& panel, const std::string& csv_path) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw IngestError("cannot write '" + csv_path + "'");
    out << "timestamp,unit_id,value\n";
    for (std::size_t t = 0; t < panel.length(); ++t) {
        for (const auto& u : panel.units) {
            out << panel.timestamp_labels[t] << ',' << u.unit_id << ',';
            if (t < u.raw_values.size() && !u.raw_values[t].empty())
                out << u.raw_values[t];
            else
                out << format_double(u.values[t]);
            out << '\n';
        }
    }
}

std::pair<PanelView, PanelView> split_pre_post(const Panel& panel) {
    panel.validate();
    PanelView pre{&panel, 0, panel.t0_index + 1};
    PanelView post{&panel, panel.t0_index + 1, panel.length()};
    return {pre, post};
}

double compute_scale(const std::vector<double>& context) {
    if (context.empty()) throw ShapeError("compute_scale: empty context");
    double acc = 0.0;
    for (double v : context) acc += std::abs(v);
    return 1.0 + acc / static_cast<double>(context.size());
}

std::vector<TrainingWindow> make_training_windows(const PanelView& pre, std::size_t horizon,
                                                  std::size_t context_len, std::size_t stride) {
    if (stride < 1) throw WindowError("stride must be >= 1");
    if (horizon < 1) throw WindowError("horizon must be >= 1");
    const std::size_t window = context_len + horizon;
    const std::size_t T0 = pre.length();
    if (window > T0)
        throw WindowError("window " + std::to_string(window) + " exceeds pre-period length " +
                          std::to_string(T0));
    std::vector<TrainingWindow> out;
    for (std::size_t ui = 0; ui < pre.panel->units.size(); ++ui) {
        const auto& unit = pre.panel->units[ui];
        for (std::size_t start = 0; start + window <= T0; start += stride) {
            TrainingWindow w;
            w.unit_id = unit.unit_id;
            w.start_index = pre.first + start;
            w.context.assign(unit.values.begin() + static_cast<std::ptrdiff_t>(w.start_index),
                             unit.values.begin() +
                                 static_cast<std::ptrdiff_t>(w.start_index + context_len));
            w.target.assign(
                unit.values.begin() + static_cast<std::ptrdiff_t>(w.start_index + context_len),
                unit.values.begin() + static_cast<std::ptrdiff_t>(w.start_index + window));
            w.scale = context_len > 0 ? compute_scale(w.context) : compute_scale(w.target);
            out.push_back(std::move(w));
        }
    }
    return out;
}

std::size_t auto_stride(std::size_t pre_len, std::size_t window_len,
                        std::size_t target_windows) {
    if (window_len > pre_len) throw WindowError("auto_stride: window exceeds pre-period");
    const std::size_t admissible = pre_len - window_len + 1;
    if (target_windows < 2 || admissible <= target_windows) return 1;
    return (admissible - 1) / (target_windows - 1);
}

Matrix calendar_features(const Panel& panel, std::size_t first, std::size_t count) {
    // 24 hour-of-day + 7 day-of-week one-hots, in UTC.
    Matrix feats(count, 31, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        std::int64_t epoch = panel.timestamps[first + i];
        std::int64_t days = epoch / 86400;
        std::int64_t secs = epoch % 86400;
        if (secs < 0) {
            secs += 86400;
            days -= 1;
        }
        int hour = static_cast<int>(secs / 3600);
        // 1970-01-01 was a Thursday.
        int dow = static_cast<int>(((days % 7) + 7 + 4) % 7);
        feats.at(i, static_cast<std::size_t>(hour)) = 1.0;
        feats.at(i, 24 + static_cast<std::size_t>(dow)) = 1.0;
    }
    return feats;
}

}  // namespace causalcast
