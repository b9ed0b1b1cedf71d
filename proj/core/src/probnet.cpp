#include "causalcast/probnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <thread>

#include "causalcast/adam.hpp"
#include "causalcast/lstm.hpp"
#include "causalcast/rng.hpp"

namespace causalcast {

namespace {

// Static work partition; results land in caller-owned slots, so the
// reduction order (and therefore the bits) never depends on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    int nt = std::max(1, threads);
    if (nt == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    nt = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(nt), n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = static_cast<std::size_t>(t); i < n;
                 i += static_cast<std::size_t>(nt))
                fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::size_t NetworkParams::w_offset(std::size_t layer) const {
    const std::size_t H = dims.hidden;
    std::size_t off = 0;
    for (std::size_t l = 0; l < layer; ++l)
        off += 4 * H * layer_input(l) + 4 * H * H + 4 * H;
    return off;
}

std::size_t NetworkParams::u_offset(std::size_t layer) const {
    return w_offset(layer) + 4 * dims.hidden * layer_input(layer);
}

std::size_t NetworkParams::b_offset(std::size_t layer) const {
    return u_offset(layer) + 4 * dims.hidden * dims.hidden;
}

std::size_t NetworkParams::head_w_offset() const { return w_offset(dims.layers); }

std::size_t NetworkParams::head_b_offset() const {
    return head_w_offset() + 3 * dims.hidden;
}

std::size_t NetworkParams::size() const { return head_b_offset() + 3; }

std::vector<NamedShape> NetworkParams::shapes() const {
    std::vector<NamedShape> out;
    for (std::size_t l = 0; l < dims.layers; ++l) {
        std::string p = "lstm" + std::to_string(l);
        out.push_back({p + ".W", w_offset(l), 4 * dims.hidden, layer_input(l)});
        out.push_back({p + ".U", u_offset(l), 4 * dims.hidden, dims.hidden});
        out.push_back({p + ".b", b_offset(l), 4 * dims.hidden, 1});
    }
    out.push_back({"head.W", head_w_offset(), 3, dims.hidden});
    out.push_back({"head.b", head_b_offset(), 3, 1});
    return out;
}

NetworkParams NetworkParams::init(const NetworkDims& dims, HeadType head, std::uint64_t seed) {
    NetworkParams p;
    p.dims = dims;
    p.head = head;
    p.flat.assign(p.size(), 0.0);
    Rng rng(derive_seed(seed, 0xA11CE));
    for (const auto& s : p.shapes()) {
        if (s.cols == 1 && s.name.ends_with(".b")) continue;  // biases stay zero
        double a = 1.0 / std::sqrt(static_cast<double>(s.cols));
        for (std::size_t i = 0; i < s.rows * s.cols; ++i)
            p.flat[s.offset + i] = a * (2.0 * rng.next_double() - 1.0);
    }
    // Forget-gate bias starts at 1 so early training keeps cell memory.
    for (std::size_t l = 0; l < dims.layers; ++l) {
        std::size_t b = p.b_offset(l);
        for (std::size_t j = 0; j < dims.hidden; ++j) p.flat[b + dims.hidden + j] = 1.0;
    }
    return p;
}

HiddenState HiddenState::zeros(const NetworkDims& dims) {
    HiddenState s;
    s.h.assign(dims.layers, std::vector<double>(dims.hidden, 0.0));
    s.c.assign(dims.layers, std::vector<double>(dims.hidden, 0.0));
    return s;
}

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (hidden < 1) throw ConfigError("hidden must be >= 1");
    if (input_dim < 1) throw ConfigError("input_dim must be >= 1");
}

DistParams distribution_head(const std::vector<double>& hidden, const NetworkParams& params,
                             double* raw_pre) {
    const std::size_t H = params.dims.hidden;
    if (hidden.size() != H) throw ShapeError("distribution_head: hidden size mismatch");
    const double* W = params.flat.data() + params.head_w_offset();
    const double* b = params.flat.data() + params.head_b_offset();
    double pre[3];
    for (int r = 0; r < 3; ++r) {
        double acc = b[r];
        const double* wr = W + static_cast<std::size_t>(r) * H;
        for (std::size_t k = 0; k < H; ++k) acc += wr[k] * hidden[k];
        pre[r] = acc;
    }
    if (raw_pre) std::copy(pre, pre + 3, raw_pre);
    DistParams d;
    d.mu = pre[0];
    d.sigma = softplus(pre[1]) + 1e-6;
    d.nu = 2.0 + softplus(pre[2]);
    return d;
}

Tape forward_loss(const TrainingWindow& window, const NetworkParams& params,
                  const Matrix* covariates) {
    const std::size_t C = window.context.size();
    const std::size_t h = window.target.size();
    const std::size_t steps = C + h;
    const std::size_t H = params.dims.hidden;
    const std::size_t L = params.dims.layers;
    const std::size_t in_dim = params.dims.input_dim;
    if (h == 0) throw ShapeError("forward_loss: empty target");
    if (!(window.scale > 0.0)) throw ShapeError("forward_loss: non-positive scale");
    if (in_dim > 1) {
        if (!covariates || covariates->rows != steps || covariates->cols != in_dim - 1)
            throw ShapeError("forward_loss: covariate matrix must be steps x (input_dim-1)");
    }

    Tape tape;
    tape.steps = steps;
    tape.loss_steps = h;
    tape.context_len = C;
    tape.scale = window.scale;
    tape.inputs.assign(steps * in_dim, 0.0);
    tape.layers.resize(L);
    for (auto& lt : tape.layers) {
        lt.gates.assign(steps * 4 * H, 0.0);
        lt.c.assign(steps * H, 0.0);
        lt.tanh_c.assign(steps * H, 0.0);
        lt.h.assign(steps * H, 0.0);
    }
    tape.head_pre.assign(h * 3, 0.0);
    tape.dists.resize(h);
    tape.targets.resize(h);

    auto scaled = [&](std::size_t k) {
        double v = k < C ? window.context[k] : window.target[k - C];
        return v / window.scale;
    };
    for (std::size_t k = 0; k < steps; ++k) {
        if (k > 0) tape.inputs[k * in_dim] = scaled(k - 1);
        for (std::size_t j = 1; j < in_dim; ++j)
            tape.inputs[k * in_dim + j] = covariates->at(k, j - 1);
    }

    std::vector<double> zero_h(H, 0.0), zero_c(H, 0.0);
    std::vector<double> hidden(H);
    double loss_sum = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double* x = tape.inputs.data() + k * in_dim;
        std::size_t x_dim = in_dim;
        for (std::size_t l = 0; l < L; ++l) {
            auto& lt = tape.layers[l];
            const double* h_prev = k > 0 ? lt.h.data() + (k - 1) * H : zero_h.data();
            const double* c_prev = k > 0 ? lt.c.data() + (k - 1) * H : zero_c.data();
            lstm_cell_forward(x, x_dim, h_prev, c_prev, H,
                              params.flat.data() + params.w_offset(l),
                              params.flat.data() + params.u_offset(l),
                              params.flat.data() + params.b_offset(l),
                              lt.gates.data() + k * 4 * H, lt.c.data() + k * H,
                              lt.h.data() + k * H, lt.tanh_c.data() + k * H);
            x = lt.h.data() + k * H;
            x_dim = H;
        }
        if (k >= C) {
            const std::size_t j = k - C;
            hidden.assign(tape.layers[L - 1].h.begin() + static_cast<std::ptrdiff_t>(k * H),
                          tape.layers[L - 1].h.begin() + static_cast<std::ptrdiff_t>((k + 1) * H));
            DistParams d = distribution_head(hidden, params, tape.head_pre.data() + j * 3);
            double y = scaled(k);
            double step_nll = nll(y, d, params.head);
            if (!std::isfinite(step_nll))
                throw NumericError("forward_loss: non-finite loss at target step " +
                                   std::to_string(j));
            tape.dists[j] = d;
            tape.targets[j] = y;
            loss_sum += step_nll;
        }
    }
    tape.loss = loss_sum / static_cast<double>(h);
    if (!std::isfinite(tape.loss)) throw NumericError("forward_loss: non-finite mean loss");
    return tape;
}

std::vector<double> backward(const Tape& tape, const NetworkParams& params,
                             const Matrix* covariates) {
    (void)covariates;  // inputs are data; nothing differentiable flows through them
    const std::size_t H = params.dims.hidden;
    const std::size_t L = params.dims.layers;
    const std::size_t in_dim = params.dims.input_dim;
    const std::size_t C = tape.context_len;

    std::vector<double> grad(params.size(), 0.0);
    std::vector<std::vector<double>> dh(L, std::vector<double>(H, 0.0));
    std::vector<std::vector<double>> dc(L, std::vector<double>(H, 0.0));
    std::vector<double> dh_prev(H), dc_prev(H), dx(std::max(H, in_dim));
    std::vector<double> zero_h(H, 0.0), zero_c(H, 0.0);

    const double* head_W = params.flat.data() + params.head_w_offset();
    double* dhead_W = grad.data() + params.head_w_offset();
    double* dhead_b = grad.data() + params.head_b_offset();
    const double inv_h = 1.0 / static_cast<double>(tape.loss_steps);

    for (std::size_t k = tape.steps; k-- > 0;) {
        if (k >= C) {
            const std::size_t j = k - C;
            const DistParams& d = tape.dists[j];
            DistGrad dg = nll_grad(tape.targets[j], d, params.head);
            const double* pre = tape.head_pre.data() + j * 3;
            double dpre[3];
            dpre[0] = dg.dmu * inv_h;
            dpre[1] = dg.dsigma * sigmoid(pre[1]) * inv_h;
            dpre[2] = dg.dnu * sigmoid(pre[2]) * inv_h;
            const double* htop = tape.layers[L - 1].h.data() + k * H;
            for (int r = 0; r < 3; ++r) {
                if (dpre[r] == 0.0) continue;
                double* wrow = dhead_W + static_cast<std::size_t>(r) * H;
                const double* wsrc = head_W + static_cast<std::size_t>(r) * H;
                for (std::size_t q = 0; q < H; ++q) {
                    wrow[q] += dpre[r] * htop[q];
                    dh[L - 1][q] += wsrc[q] * dpre[r];
                }
                dhead_b[r] += dpre[r];
            }
        }
        for (std::size_t l = L; l-- > 0;) {
            const auto& lt = tape.layers[l];
            const double* x =
                l == 0 ? tape.inputs.data() + k * in_dim : tape.layers[l - 1].h.data() + k * H;
            std::size_t x_dim = l == 0 ? in_dim : H;
            const double* h_prev = k > 0 ? lt.h.data() + (k - 1) * H : zero_h.data();
            const double* c_prev = k > 0 ? lt.c.data() + (k - 1) * H : zero_c.data();
            lstm_cell_backward(x, x_dim, h_prev, c_prev, H,
                               params.flat.data() + params.w_offset(l),
                               params.flat.data() + params.u_offset(l),
                               lt.gates.data() + k * 4 * H, lt.c.data() + k * H,
                               lt.tanh_c.data() + k * H, dh[l].data(), dc[l].data(), dx.data(),
                               dh_prev.data(), dc_prev.data(), grad.data() + params.w_offset(l),
                               grad.data() + params.u_offset(l), grad.data() + params.b_offset(l));
            dh[l] = dh_prev;
            dc[l] = dc_prev;
            if (l > 0)
                for (std::size_t q = 0; q < H; ++q) dh[l - 1][q] += dx[q];
        }
    }
    return grad;
}

ModelArtifact train(const std::vector<TrainingWindow>& windows, const TrainConfig& cfg) {
    cfg.validate();
    if (windows.empty()) throw ConfigError("train: no windows");
    if (cfg.input_dim != 1)
        throw ConfigError("train: covariate inputs are wired per-call via forward_loss");

    NetworkDims dims{cfg.input_dim, cfg.hidden, 2};
    NetworkParams params = NetworkParams::init(dims, cfg.head_type, cfg.rng_seed);
    AdamState adam(params.size());

    std::vector<std::size_t> order(windows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<double> loss_curve;
    loss_curve.reserve(cfg.epochs);

    std::vector<std::vector<double>> batch_grads(cfg.batch_size);
    std::vector<double> batch_losses(cfg.batch_size, 0.0);
    std::vector<std::string> batch_errors(cfg.batch_size);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.rng_seed, 1000 + epoch));
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t n = std::min(cfg.batch_size, order.size() - start);
            parallel_for(n, cfg.threads, [&](std::size_t i) {
                try {
                    Tape tape = forward_loss(windows[order[start + i]], params);
                    batch_losses[i] = tape.loss;
                    batch_grads[i] = backward(tape, params);
                    batch_errors[i].clear();
                } catch (const Error& e) {
                    batch_losses[i] = std::nan("");
                    batch_grads[i].assign(params.size(), 0.0);
                    batch_errors[i] = e.what();
                }
            });
            std::vector<double> grad(params.size(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(batch_losses[i]))
                    throw TrainError(
                        "training loss diverged at epoch " + std::to_string(epoch) +
                        (batch_errors[i].empty() ? "" : std::string(": ") + batch_errors[i]));
                epoch_loss += batch_losses[i];
                const auto& g = batch_grads[i];
                for (std::size_t q = 0; q < grad.size(); ++q) grad[q] += g[q];
            }
            const double inv = 1.0 / static_cast<double>(n);
            for (double& g : grad) g *= inv;
            clip_grad_norm(grad, cfg.grad_clip_norm);
            adam_step(params.flat, grad, adam, cfg.learning_rate);
        }
        epoch_loss /= static_cast<double>(windows.size());
        if (!std::isfinite(epoch_loss))
            throw TrainError("training loss diverged at epoch " + std::to_string(epoch));
        loss_curve.push_back(epoch_loss);
    }

    ModelArtifact model;
    model.params = std::move(params);
    model.cfg = cfg;
    model.tau_grid = default_tau_grid();
    model.loss_curve = std::move(loss_curve);
    return model;
}

ForecastDistribution forecast_samples(const ModelArtifact& model,
                                      const std::vector<double>& history, std::size_t horizon,
                                      std::size_t n_samples, std::uint64_t seed,
                                      const std::string& unit_id, int threads,
                                      const Matrix* covariates) {
    if (horizon == 0) throw ConfigError("forecast horizon must be > 0");
    if (n_samples < 2) throw ConfigError("need at least 2 sample paths");
    const std::size_t C = model.cfg.context_len;
    if (C == 0) throw ConfigError("model has no context length recorded");
    if (history.size() < C) throw ConfigError("history shorter than model context length");
    const std::size_t H = model.params.dims.hidden;
    const std::size_t L = model.params.dims.layers;
    const std::size_t in_dim = model.params.dims.input_dim;
    if (in_dim > 1) {
        if (!covariates || covariates->rows != C + horizon || covariates->cols != in_dim - 1)
            throw ShapeError("forecast covariates must be (context+horizon) x (input_dim-1)");
    }

    std::vector<double> context(history.end() - static_cast<std::ptrdiff_t>(C), history.end());
    const double scale = compute_scale(context);
    std::vector<double> scaled(C);
    for (std::size_t i = 0; i < C; ++i) scaled[i] = context[i] / scale;

    ForecastDistribution out;
    out.unit_id = unit_id;
    out.horizon = horizon;
    out.rng_seed = seed;
    out.tau_grid = model.tau_grid;
    out.sample_paths = Matrix(n_samples, horizon);

    parallel_for(n_samples, threads, [&](std::size_t p) {
        Rng rng(derive_seed(seed, p));
        HiddenState state = HiddenState::zeros(model.params.dims);
        std::vector<double> x(in_dim, 0.0), gates(4 * H), tanh_c(H), h_new(H), c_new(H);
        auto feed = [&](double value, std::size_t pos) {
            x[0] = value;
            for (std::size_t j = 1; j < in_dim; ++j) x[j] = covariates->at(pos, j - 1);
            const double* xin = x.data();
            std::size_t x_dim = in_dim;
            for (std::size_t l = 0; l < L; ++l) {
                lstm_cell_forward(xin, x_dim, state.h[l].data(), state.c[l].data(), H,
                                  model.params.flat.data() + model.params.w_offset(l),
                                  model.params.flat.data() + model.params.u_offset(l),
                                  model.params.flat.data() + model.params.b_offset(l),
                                  gates.data(), c_new.data(), h_new.data(), tanh_c.data());
                state.h[l] = h_new;
                state.c[l] = c_new;
                xin = state.h[l].data();
                x_dim = H;
            }
        };
        for (std::size_t k = 0; k < C; ++k) feed(k == 0 ? 0.0 : scaled[k - 1], k);
        double prev = scaled[C - 1];
        for (std::size_t j = 0; j < horizon; ++j) {
            feed(prev, C + j);
            DistParams d = distribution_head(state.h[L - 1], model.params);
            double draw = sample(d, model.params.head, rng);
            out.sample_paths.at(p, j) = draw * scale;
            prev = draw;
        }
    });

    for (double v : out.sample_paths.data)
        if (!std::isfinite(v)) throw NumericError("forecast produced non-finite sample");
    out.quantile_fan = extract_quantiles(out.sample_paths, out.tau_grid);
    return out;
}

Matrix extract_quantiles(const Matrix& samples, const std::vector<double>& tau_grid) {
    const std::size_t n = samples.rows;
    const std::size_t h = samples.cols;
    if (n < 2) throw ShapeError("extract_quantiles: need at least 2 samples");
    for (std::size_t q = 0; q < tau_grid.size(); ++q) {
        if (!(tau_grid[q] > 0.0 && tau_grid[q] < 1.0))
            throw ConfigError("tau grid values must lie in (0,1)");
        if (q > 0 && !(tau_grid[q] > tau_grid[q - 1]))
            throw ConfigError("tau grid must be strictly increasing");
    }
    Matrix fan(tau_grid.size(), h);
    std::vector<double> col(n);
    for (std::size_t t = 0; t < h; ++t) {
        for (std::size_t i = 0; i < n; ++i) col[i] = samples.at(i, t);
        std::sort(col.begin(), col.end());
        for (std::size_t q = 0; q < tau_grid.size(); ++q) {
            double pos = tau_grid[q] * static_cast<double>(n - 1);
            std::size_t lo = static_cast<std::size_t>(pos);
            double frac = pos - static_cast<double>(lo);
            double val = col[lo];
            if (lo + 1 < n) val += frac * (col[lo + 1] - col[lo]);
            fan.at(q, t) = val;
        }
    }
    return fan;
}

std::vector<double> default_tau_grid() {
    return {0.01, 0.05, 0.1, 0.25, 0.3, 0.4, 0.5, 0.6, 0.75, 0.8, 0.9, 0.95, 0.99};
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_f64(std::ofstream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_string(std::ofstream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
void put_f64_vec(std::ofstream& out, const std::vector<double>& v) {
    put_u64(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

struct Reader {
    std::ifstream in;
    std::string path;

    void need(void* dst, std::size_t n) {
        in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw ArtifactError("truncated model file '" + path + "'");
    }
    std::uint32_t u32() {
        std::uint32_t v;
        need(&v, sizeof(v));
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        need(&v, sizeof(v));
        return v;
    }
    double f64() {
        double v;
        need(&v, sizeof(v));
        return v;
    }
    std::string str() {
        std::uint32_t n = u32();
        if (n > (1u << 20)) throw ArtifactError("corrupt string length in '" + path + "'");
        std::string s(n, '\0');
        need(s.data(), n);
        return s;
    }
    std::vector<double> f64_vec() {
        std::uint64_t n = u64();
        if (n > (1ull << 28)) throw ArtifactError("corrupt array length in '" + path + "'");
        std::vector<double> v(n);
        need(v.data(), n * sizeof(double));
        return v;
    }
};

constexpr char kMagic[8] = {'C', 'C', 'A', 'S', 'T', 'M', 'D', 'L'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

void save_model(const ModelArtifact& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot write '" + path + "'");
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, kFormatVersion);
    put_u32(out, model.params.head == HeadType::student_t ? 0u : 1u);
    put_u64(out, model.params.dims.input_dim);
    put_u64(out, model.params.dims.hidden);
    put_u64(out, model.params.dims.layers);
    put_u64(out, model.cfg.epochs);
    put_u64(out, model.cfg.batch_size);
    put_f64(out, model.cfg.learning_rate);
    put_f64(out, model.cfg.grad_clip_norm);
    put_u64(out, model.cfg.rng_seed);
    put_u64(out, model.cfg.context_len);
    put_u64(out, model.cfg.horizon);
    put_string(out, model.scaling_mode);
    put_f64_vec(out, model.tau_grid);
    put_f64_vec(out, model.loss_curve);
    auto shapes = model.params.shapes();
    put_u64(out, shapes.size());
    for (const auto& s : shapes) {
        put_string(out, s.name);
        put_u64(out, s.rows);
        put_u64(out, s.cols);
        out.write(reinterpret_cast<const char*>(model.params.flat.data() + s.offset),
                  static_cast<std::streamsize>(s.rows * s.cols * sizeof(double)));
    }
    if (!out) throw ArtifactError("write failed for '" + path + "'");
}

ModelArtifact load_model(const std::string& path) {
    Reader r;
    r.path = path;
    r.in.open(path, std::ios::binary);
    if (!r.in) throw ArtifactError("cannot open '" + path + "'");
    char magic[8];
    r.need(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ArtifactError("'" + path + "' is not a model artifact (bad magic)");
    std::uint32_t version = r.u32();
    if (version != kFormatVersion)
        throw ArtifactError("unsupported model format version " + std::to_string(version));

    ModelArtifact model;
    model.params.head = r.u32() == 0 ? HeadType::student_t : HeadType::gaussian;
    model.params.dims.input_dim = r.u64();
    model.params.dims.hidden = r.u64();
    model.params.dims.layers = r.u64();
    model.cfg.epochs = r.u64();
    model.cfg.batch_size = r.u64();
    model.cfg.learning_rate = r.f64();
    model.cfg.grad_clip_norm = r.f64();
    model.cfg.rng_seed = r.u64();
    model.cfg.context_len = r.u64();
    model.cfg.horizon = r.u64();
    model.cfg.head_type = model.params.head;
    model.cfg.hidden = model.params.dims.hidden;
    model.cfg.input_dim = model.params.dims.input_dim;
    model.scaling_mode = r.str();
    model.tau_grid = r.f64_vec();
    model.loss_curve = r.f64_vec();

    if (model.params.dims.hidden == 0 || model.params.dims.hidden > 4096 ||
        model.params.dims.layers == 0 || model.params.dims.layers > 16)
        throw ArtifactError("corrupt dimensions in '" + path + "'");
    model.params.flat.assign(model.params.size(), 0.0);
    auto shapes = model.params.shapes();
    std::uint64_t count = r.u64();
    if (count != shapes.size()) throw ArtifactError("unexpected array count in '" + path + "'");
    for (const auto& s : shapes) {
        std::string name = r.str();
        std::uint64_t rows = r.u64();
        std::uint64_t cols = r.u64();
        if (name != s.name || rows != s.rows || cols != s.cols)
            throw ArtifactError("array '" + name + "' does not match expected layout in '" +
                                path + "'");
        r.need(model.params.flat.data() + s.offset, rows * cols * sizeof(double));
    }
    return model;
}

}  // namespace causalcast
