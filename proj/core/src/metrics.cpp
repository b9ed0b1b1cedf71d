#include "causalcast/metrics.hpp"

#include <cmath>

namespace causalcast {

void MetricConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("metrics: alpha must be in (0,1)");
    if (season < 1) throw ConfigError("metrics: season must be >= 1");
    if (crps_grid < 1) throw ConfigError("metrics: crps grid must be >= 1");
}

namespace {
void check_lengths(const std::vector<double>& a, const std::vector<double>& b,
                   const char* what) {
    if (a.size() != b.size() || a.empty())
        throw MetricError(std::string(what) + ": length mismatch or empty input");
}
}  // namespace

double wape(const std::vector<double>& actuals, const std::vector<double>& forecasts) {
    check_lengths(actuals, forecasts, "wape");
    double abs_err = 0.0, sum_y = 0.0;
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        abs_err += std::abs(actuals[i] - forecasts[i]);
        sum_y += actuals[i];
    }
    if (sum_y == 0.0) throw MetricError("wape: actuals sum to zero");
    return abs_err / sum_y;
}

double wrmspe(const std::vector<double>& actuals, const std::vector<double>& forecasts) {
    check_lengths(actuals, forecasts, "wrmspe");
    double sq = 0.0, sum_y = 0.0;
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        double e = actuals[i] - forecasts[i];
        sq += e * e;
        sum_y += actuals[i];
    }
    double mean_y = sum_y / static_cast<double>(actuals.size());
    if (mean_y == 0.0) throw MetricError("wrmspe: mean actual is zero");
    return std::sqrt(sq / static_cast<double>(actuals.size())) / mean_y;
}

double msis(const std::vector<double>& actuals, const std::vector<double>& lower,
            const std::vector<double>& upper, const std::vector<double>& in_sample,
            const MetricConfig& cfg) {
    cfg.validate();
    check_lengths(actuals, lower, "msis");
    check_lengths(actuals, upper, "msis");
    const std::size_t S = cfg.season;
    if (in_sample.size() <= S) throw MetricError("msis: in-sample shorter than one season");

    double num = 0.0;
    const double penalty = 2.0 / cfg.alpha;
    for (std::size_t t = 0; t < actuals.size(); ++t) {
        if (lower[t] > upper[t]) throw MetricError("msis: lower bound above upper bound");
        num += upper[t] - lower[t];
        if (actuals[t] < lower[t]) num += penalty * (lower[t] - actuals[t]);
        if (actuals[t] > upper[t]) num += penalty * (actuals[t] - upper[t]);
    }
    num /= static_cast<double>(actuals.size());

    double denom = 0.0;
    for (std::size_t t = S; t < in_sample.size(); ++t)
        denom += std::abs(in_sample[t] - in_sample[t - S]);
    denom /= static_cast<double>(in_sample.size() - S);
    if (denom == 0.0) throw MetricError("msis: zero seasonal denominator");
    return num / denom;
}

double crps(double actual, const std::vector<double>& fan_column,
            const std::vector<double>& tau_grid) {
    if (fan_column.size() != tau_grid.size() || fan_column.empty())
        throw MetricError("crps: fan and tau grid size mismatch");
    double acc = 0.0;
    for (std::size_t q = 0; q < tau_grid.size(); ++q) {
        if (q > 0 && fan_column[q] < fan_column[q - 1])
            throw MetricError("crps: fan not monotone in tau");
        double u = actual - fan_column[q];
        double tau = tau_grid[q];
        acc += 2.0 * (u >= 0.0 ? tau * u : (tau - 1.0) * u);
    }
    return acc / static_cast<double>(tau_grid.size());
}

double crps_mean(const std::vector<double>& actuals, const Matrix& fan,
                 const std::vector<double>& tau_grid) {
    if (fan.cols != actuals.size() || fan.rows != tau_grid.size())
        throw MetricError("crps_mean: fan shape mismatch");
    double acc = 0.0;
    std::vector<double> col(fan.rows);
    for (std::size_t t = 0; t < actuals.size(); ++t) {
        for (std::size_t q = 0; q < fan.rows; ++q) col[q] = fan.at(q, t);
        acc += crps(actuals[t], col, tau_grid);
    }
    return acc / static_cast<double>(actuals.size());
}

std::vector<double> equispaced_tau_grid(std::size_t count) {
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = static_cast<double>(i + 1) / static_cast<double>(count + 1);
    return grid;
}

}  // namespace causalcast
