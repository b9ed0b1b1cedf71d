#ifndef CAUSALCAST_PROBNET_HPP
#define CAUSALCAST_PROBNET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "causalcast/common.hpp"
#include "causalcast/panel.hpp"
#include "causalcast/student_t.hpp"

namespace causalcast {

struct NetworkDims {
    std::size_t input_dim = 1;
    std::size_t hidden = 25;
    std::size_t layers = 2;
};

struct NamedShape {
    std::string name;
    std::size_t offset = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

// All learnable parameters in one flat buffer; per-layer gate weights,
// recurrent weights, biases, then the three head rows (mu, sigma, nu).
struct NetworkParams {
    NetworkDims dims;
    HeadType head = HeadType::student_t;
    std::uint32_t version = 1;
    std::vector<double> flat;

    static NetworkParams init(const NetworkDims& dims, HeadType head, std::uint64_t seed);

    std::size_t layer_input(std::size_t layer) const {
        return layer == 0 ? dims.input_dim : dims.hidden;
    }
    std::size_t w_offset(std::size_t layer) const;
    std::size_t u_offset(std::size_t layer) const;
    std::size_t b_offset(std::size_t layer) const;
    std::size_t head_w_offset() const;
    std::size_t head_b_offset() const;
    std::size_t size() const;

    std::vector<NamedShape> shapes() const;
};

struct HiddenState {
    std::vector<std::vector<double>> h;  // per layer
    std::vector<std::vector<double>> c;

    static HiddenState zeros(const NetworkDims& dims);
};

struct TrainConfig {
    std::size_t epochs = 50;
    std::size_t batch_size = 64;
    double learning_rate = 1e-3;
    double grad_clip_norm = 10.0;
    std::uint64_t rng_seed = 1;
    std::size_t context_len = 0;
    std::size_t horizon = 0;
    HeadType head_type = HeadType::student_t;
    std::size_t hidden = 25;
    std::size_t input_dim = 1;
    int threads = 1;

    void validate() const;
};

// Intermediates retained by forward_loss for exact reverse-mode.
struct Tape {
    std::size_t steps = 0;       // context + target
    std::size_t loss_steps = 0;  // target only
    std::size_t context_len = 0;
    double scale = 1.0;
    double loss = 0.0;
    std::vector<double> inputs;  // steps x input_dim
    struct LayerTape {
        std::vector<double> gates;   // steps x 4H (post-activation)
        std::vector<double> c;       // steps x H
        std::vector<double> tanh_c;  // steps x H
        std::vector<double> h;       // steps x H
    };
    std::vector<LayerTape> layers;
    std::vector<double> head_pre;     // loss_steps x 3 (raw affine outputs)
    std::vector<DistParams> dists;    // loss_steps
    std::vector<double> targets;      // loss_steps, scaled
};

// Monte-Carlo sample paths plus the quantile fan extracted from them,
// both in original (unscaled) units.
struct ForecastDistribution {
    std::string unit_id;
    std::size_t horizon = 0;
    Matrix sample_paths;  // n_samples x horizon
    Matrix quantile_fan;  // Q x horizon, non-decreasing in tau at every step
    std::vector<double> tau_grid;
    std::uint64_t rng_seed = 0;
};

struct ModelArtifact {
    NetworkParams params;
    TrainConfig cfg;
    std::vector<double> tau_grid;
    std::string scaling_mode = "mean_abs_plus_one";
    std::vector<double> loss_curve;  // mean NLL per epoch
};

// Maps a hidden vector through the head affine + links:
// mu = affine, sigma = softplus(affine) + 1e-6, nu = 2 + softplus(affine).
// raw_pre, when given, receives the three pre-link affine values.
DistParams distribution_head(const std::vector<double>& hidden, const NetworkParams& params,
                             double* raw_pre = nullptr);

// Teacher-forced unroll over context + target; mean NLL over target steps.
// Optional covariates: (context_len + target_len) x (input_dim - 1).
Tape forward_loss(const TrainingWindow& window, const NetworkParams& params,
                  const Matrix* covariates = nullptr);

std::vector<double> backward(const Tape& tape, const NetworkParams& params,
                             const Matrix* covariates = nullptr);

ModelArtifact train(const std::vector<TrainingWindow>& windows, const TrainConfig& cfg);

ForecastDistribution forecast_samples(const ModelArtifact& model,
                                      const std::vector<double>& history, std::size_t horizon,
                                      std::size_t n_samples, std::uint64_t seed,
                                      const std::string& unit_id = std::string(),
                                      int threads = 1, const Matrix* covariates = nullptr);

// Empirical quantiles with linear interpolation between order statistics.
Matrix extract_quantiles(const Matrix& samples, const std::vector<double>& tau_grid);

void save_model(const ModelArtifact& model, const std::string& path);
ModelArtifact load_model(const std::string& path);

std::vector<double> default_tau_grid();

}  // namespace causalcast

#endif
