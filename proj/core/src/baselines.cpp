#include "causalcast/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "causalcast/adam.hpp"
#include "causalcast/lstm.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/student_t.hpp"

namespace causalcast {

std::vector<double> seasonal_naive(const std::vector<double>& history, std::size_t season,
                                   std::size_t horizon) {
    if (season < 1) throw ConfigError("seasonal_naive: season must be >= 1");
    if (history.size() < season)
        throw ConfigError("seasonal_naive: history shorter than one season");
    std::vector<double> out(horizon);
    const std::size_t n = history.size();
    for (std::size_t k = 0; k < horizon; ++k) out[k] = history[n - season + (k % season)];
    return out;
}

namespace {

// One full pass of the additive Holt-Winters recursions. Seasonal terms
// start at zero so that gamma = 0 degrades cleanly to Holt's method and
// (alpha, beta, gamma) = (1, 0, 0) reduces to the naive forecast.
EtsState ets_run(const std::vector<double>& y, std::size_t S, const EtsSmoothing& p) {
    EtsState st;
    st.smoothing = p;
    st.seasonal.assign(S, 0.0);
    double level0 = 0.0;
    for (std::size_t t = 0; t < S; ++t) level0 += y[t];
    st.level = level0 / static_cast<double>(S);
    st.trend = 0.0;
    st.steps_seen = 0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const std::size_t si = t % S;
        const double pred = st.level + st.trend + st.seasonal[si];
        const double err = y[t] - pred;
        // The first cycle only seeds the seasonal terms; judging fits on
        // it rewards aggressive trend parameters.
        if (t >= S) {
            st.in_sample_sse += err * err;
            st.residuals.push_back(err);
        }
        const double prev_level = st.level;
        st.level = p.alpha * (y[t] - st.seasonal[si]) + (1.0 - p.alpha) * (st.level + st.trend);
        st.trend = p.beta * (st.level - prev_level) + (1.0 - p.beta) * st.trend;
        st.seasonal[si] = p.gamma * (y[t] - st.level) + (1.0 - p.gamma) * st.seasonal[si];
        st.steps_seen += 1;
    }
    return st;
}

}  // namespace

EtsState ets_fit(const std::vector<double>& history, std::size_t season,
                 std::optional<EtsSmoothing> fixed) {
    if (season < 1) throw ConfigError("ets_fit: season must be >= 1");
    if (history.size() < 2 * season)
        throw ConfigError("ets_fit: history must cover at least two seasons");

    EtsState best;
    if (fixed) {
        best = ets_run(history, season, *fixed);
    } else {
        bool first = true;
        for (int a = 0; a <= 10; ++a) {
            for (int b = 0; b <= 10; ++b) {
                for (int g = 0; g <= 10; ++g) {
                    EtsSmoothing p{a / 10.0, b / 10.0, g / 10.0};
                    EtsState st = ets_run(history, season, p);
                    if (first || st.in_sample_sse < best.in_sample_sse) {
                        best = std::move(st);
                        first = false;
                    }
                }
            }
        }
    }
    // Additive normalisation: seasonal terms sum to zero, remainder goes
    // into the level.
    double mean_s = 0.0;
    for (double s : best.seasonal) mean_s += s;
    mean_s /= static_cast<double>(best.seasonal.size());
    for (double& s : best.seasonal) s -= mean_s;
    best.level += mean_s;
    return best;
}

std::vector<double> ets_point_forecast(const EtsState& state, std::size_t horizon) {
    const std::size_t S = state.seasonal.size();
    std::vector<double> out(horizon);
    for (std::size_t k = 0; k < horizon; ++k)
        out[k] = state.level + static_cast<double>(k + 1) * state.trend +
                 state.seasonal[(state.steps_seen + k) % S];
    return out;
}

ForecastDistribution ets_forecast(const EtsState& state, std::size_t horizon,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const std::vector<double>& tau_grid,
                                  const std::string& unit_id) {
    if (horizon == 0) throw ConfigError("ets_forecast: horizon must be > 0");
    std::vector<double> point = ets_point_forecast(state, horizon);

    ForecastDistribution out;
    out.unit_id = unit_id;
    out.horizon = horizon;
    out.rng_seed = seed;
    out.tau_grid = tau_grid;
    out.sample_paths = Matrix(std::max<std::size_t>(n_samples, 2), horizon);
    const std::size_t r = state.residuals.size();
    for (std::size_t p = 0; p < out.sample_paths.rows; ++p) {
        Rng rng(derive_seed(seed, p));
        for (std::size_t k = 0; k < horizon; ++k) {
            double eps = r > 0 ? state.residuals[rng.next_index(r)] : 0.0;
            out.sample_paths.at(p, k) = point[k] + eps;
        }
    }
    out.quantile_fan = extract_quantiles(out.sample_paths, tau_grid);
    return out;
}

namespace {

struct FfnnTape {
    std::vector<double> x;           // scaled context
    std::vector<double> hidden_pre;  // width
    std::vector<double> hidden;      // relu(hidden_pre)
    std::vector<double> head_pre;    // 3h
    std::vector<DistParams> dists;   // h
    std::vector<double> targets;     // scaled
    double loss = 0.0;
};

FfnnTape ffnn_forward(const TrainingWindow& w, const FfnnModel& m, bool with_loss = true) {
    if (w.context.size() != m.context_len || (with_loss && w.target.size() != m.horizon))
        throw ShapeError("ffnn: window does not match model dimensions");
    if (!(w.scale > 0.0)) throw ShapeError("ffnn: non-positive scale");
    FfnnTape t;
    t.x.resize(m.context_len);
    for (std::size_t i = 0; i < m.context_len; ++i) t.x[i] = w.context[i] / w.scale;
    t.hidden_pre.assign(m.width, 0.0);
    t.hidden.assign(m.width, 0.0);
    const double* W1 = m.flat.data() + m.w1_offset();
    const double* b1 = m.flat.data() + m.b1_offset();
    for (std::size_t j = 0; j < m.width; ++j) {
        double acc = b1[j];
        const double* row = W1 + j * m.context_len;
        for (std::size_t i = 0; i < m.context_len; ++i) acc += row[i] * t.x[i];
        t.hidden_pre[j] = acc;
        t.hidden[j] = acc > 0.0 ? acc : 0.0;
    }
    const double* W2 = m.flat.data() + m.w2_offset();
    const double* b2 = m.flat.data() + m.b2_offset();
    t.head_pre.assign(3 * m.horizon, 0.0);
    t.dists.resize(m.horizon);
    t.targets.assign(m.horizon, 0.0);
    double loss_sum = 0.0;
    for (std::size_t k = 0; k < m.horizon; ++k) {
        double pre[3];
        for (int r = 0; r < 3; ++r) {
            const std::size_t row_idx = 3 * k + static_cast<std::size_t>(r);
            double acc = b2[row_idx];
            const double* row = W2 + row_idx * m.width;
            for (std::size_t j = 0; j < m.width; ++j) acc += row[j] * t.hidden[j];
            pre[r] = acc;
            t.head_pre[row_idx] = acc;
        }
        DistParams d;
        d.mu = pre[0];
        d.sigma = softplus(pre[1]) + 1e-6;
        d.nu = 2.0 + softplus(pre[2]);
        t.dists[k] = d;
        if (!with_loss) continue;
        double y = w.target[k] / w.scale;
        double step = nll(y, d, m.head);
        if (!std::isfinite(step))
            throw NumericError("ffnn: non-finite loss at step " + std::to_string(k));
        t.targets[k] = y;
        loss_sum += step;
    }
    t.loss = loss_sum / static_cast<double>(m.horizon);
    return t;
}

}  // namespace

double ffnn_loss(const TrainingWindow& window, const FfnnModel& model) {
    return ffnn_forward(window, model).loss;
}

std::vector<double> ffnn_loss_grad(const TrainingWindow& window, const FfnnModel& model,
                                   double* loss_out) {
    FfnnTape t = ffnn_forward(window, model);
    if (loss_out) *loss_out = t.loss;
    std::vector<double> grad(model.size(), 0.0);
    std::vector<double> dhidden(model.width, 0.0);
    const double* W2 = model.flat.data() + model.w2_offset();
    double* dW2 = grad.data() + model.w2_offset();
    double* db2 = grad.data() + model.b2_offset();
    const double inv_h = 1.0 / static_cast<double>(model.horizon);
    for (std::size_t k = 0; k < model.horizon; ++k) {
        DistGrad dg = nll_grad(t.targets[k], t.dists[k], model.head);
        double dpre[3];
        dpre[0] = dg.dmu * inv_h;
        dpre[1] = dg.dsigma * sigmoid(t.head_pre[3 * k + 1]) * inv_h;
        dpre[2] = dg.dnu * sigmoid(t.head_pre[3 * k + 2]) * inv_h;
        for (int r = 0; r < 3; ++r) {
            if (dpre[r] == 0.0) continue;
            const std::size_t row_idx = 3 * k + static_cast<std::size_t>(r);
            double* dw_row = dW2 + row_idx * model.width;
            const double* w_row = W2 + row_idx * model.width;
            for (std::size_t j = 0; j < model.width; ++j) {
                dw_row[j] += dpre[r] * t.hidden[j];
                dhidden[j] += w_row[j] * dpre[r];
            }
            db2[row_idx] += dpre[r];
        }
    }
    double* dW1 = grad.data() + model.w1_offset();
    double* db1 = grad.data() + model.b1_offset();
    for (std::size_t j = 0; j < model.width; ++j) {
        if (t.hidden_pre[j] <= 0.0) continue;  // relu gate
        double d = dhidden[j];
        double* row = dW1 + j * model.context_len;
        for (std::size_t i = 0; i < model.context_len; ++i) row[i] += d * t.x[i];
        db1[j] += d;
    }
    return grad;
}

FfnnModel ffnn_train(const std::vector<TrainingWindow>& windows, const TrainConfig& cfg,
                     std::size_t width) {
    cfg.validate();
    if (windows.empty()) throw ConfigError("ffnn_train: no windows");
    FfnnModel m;
    m.context_len = windows.front().context.size();
    m.horizon = windows.front().target.size();
    m.width = width;
    m.head = cfg.head_type;
    for (const auto& w : windows)
        if (w.context.size() != m.context_len || w.target.size() != m.horizon)
            throw ShapeError("ffnn_train: windows must share context and target lengths");
    if (m.context_len == 0) throw ConfigError("ffnn_train: needs a non-empty context");

    m.flat.assign(m.size(), 0.0);
    Rng init_rng(derive_seed(cfg.rng_seed, 0xFF77));
    auto init_block = [&](std::size_t off, std::size_t rows, std::size_t cols) {
        double a = 1.0 / std::sqrt(static_cast<double>(cols));
        for (std::size_t i = 0; i < rows * cols; ++i)
            m.flat[off + i] = a * (2.0 * init_rng.next_double() - 1.0);
    };
    init_block(m.w1_offset(), m.width, m.context_len);
    init_block(m.w2_offset(), 3 * m.horizon, m.width);

    AdamState adam(m.size());
    std::vector<std::size_t> order(windows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.rng_seed, 7000 + epoch));
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t n = std::min(cfg.batch_size, order.size() - start);
            std::vector<double> grad(m.size(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double loss = 0.0;
                auto g = ffnn_loss_grad(windows[order[start + i]], m, &loss);
                if (!std::isfinite(loss))
                    throw TrainError("ffnn loss diverged at epoch " + std::to_string(epoch));
                epoch_loss += loss;
                for (std::size_t q = 0; q < grad.size(); ++q) grad[q] += g[q];
            }
            const double inv = 1.0 / static_cast<double>(n);
            for (double& g : grad) g *= inv;
            clip_grad_norm(grad, cfg.grad_clip_norm);
            adam_step(m.flat, grad, adam, cfg.learning_rate);
        }
        m.loss_curve.push_back(epoch_loss / static_cast<double>(windows.size()));
    }
    return m;
}

ForecastDistribution ffnn_forecast(const FfnnModel& model, const std::vector<double>& history,
                                   std::size_t n_samples, std::uint64_t seed,
                                   const std::vector<double>& tau_grid,
                                   const std::string& unit_id) {
    if (history.size() < model.context_len)
        throw ConfigError("ffnn_forecast: history shorter than model context");
    if (n_samples < 2) throw ConfigError("ffnn_forecast: need at least 2 sample paths");
    TrainingWindow probe;
    probe.context.assign(history.end() - static_cast<std::ptrdiff_t>(model.context_len),
                         history.end());
    probe.scale = compute_scale(probe.context);
    FfnnTape t = ffnn_forward(probe, model, /*with_loss=*/false);

    ForecastDistribution out;
    out.unit_id = unit_id;
    out.horizon = model.horizon;
    out.rng_seed = seed;
    out.tau_grid = tau_grid;
    out.sample_paths = Matrix(n_samples, model.horizon);
    for (std::size_t p = 0; p < n_samples; ++p) {
        Rng rng(derive_seed(seed, p));
        for (std::size_t k = 0; k < model.horizon; ++k)
            out.sample_paths.at(p, k) = sample(t.dists[k], model.head, rng) * probe.scale;
    }
    for (double v : out.sample_paths.data)
        if (!std::isfinite(v)) throw NumericError("ffnn forecast produced non-finite sample");
    out.quantile_fan = extract_quantiles(out.sample_paths, tau_grid);
    return out;
}

}  // namespace causalcast
