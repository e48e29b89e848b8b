// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#ifndef FXC_MLP_HPP
#define FXC_MLP_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fxc {

/// The seven expression classes in fixed output order (output node i
/// reports class i).
enum class ExpressionLabel : int {
    Anger = 0,
    Fear = 1,
    Surprise = 2,
    Sadness = 3,
    Happiness = 4,
    Disgust = 5,
    Neutral = 6,
};
inline constexpr int kLabelCount = 7;

const char* label_name(ExpressionLabel label);

/// Parse a canonical label name (case-insensitive; "Sad", "Happy" and
/// "Joy" are accepted aliases). std::nullopt when unknown.
std::optional<ExpressionLabel> parse_label(const std::string& name);

/// Label for a JAFFE-convention file name, keyed on the two-letter code in
/// the second dot-separated token (e.g. "KA.AN1.39.pgm" -> Anger).
std::optional<ExpressionLabel> label_from_jaffe_filename(const std::string& path);

/// Numerically stable logistic 1 / (1 + e^-t); saturates, never NaN.
double sigmoid(double t);

/// One fully connected layer: out x in weights plus a bias per unit.
struct MlpLayer {
    int in = 0;
    int out = 0;
    std::vector<double> weights; // row-major, weights[i*in + j]
    std::vector<double> bias;    // length out

    bool operator==(const MlpLayer&) const = default;
};

/// Feed-forward network; every non-input layer applies the sigmoid.
struct MlpModel {
    std::vector<int> topology; // [n_in, hidden..., n_out]
    std::vector<MlpLayer> layers;

    int input_size() const { return topology.front(); }
    int output_size() const { return topology.back(); }

    bool operator==(const MlpModel&) const = default;
};

struct TrainConfig {
    double learning_rate = 0.3;
    long max_epochs = 200000;
    double target_error = 1e-7; // epoch MSE threshold
    std::uint64_t seed = 42;
};

/**
 * @brief Weights and biases drawn uniformly from [-0.5, 0.5).
 *
 * Draw order is fixed for reproducibility: layer by layer, unit by unit,
 * that unit's incoming weights first (input index ascending), then its
 * bias; values come from the xorshift64* stream in rng.hpp seeded with
 * `seed`.
 */
MlpModel init_weights(const std::vector<int>& topology, std::uint64_t seed);

/// All layer activations; front() is the input copy, back() the output.
std::vector<std::vector<double>> forward(const MlpModel& model,
                                         const std::vector<double>& x);

/// Output activations only.
std::vector<double> forward_output(const MlpModel& model,
                                   const std::vector<double>& x);

/// Per-layer loss gradients for one sample.
struct MlpGradients {
    std::vector<MlpLayer> layers; // same shapes as the model's layers
    double error = 0.0;           // 0.5 * sum_k (y_k - t_k)^2, pre-update
};

/// Gradients of E = 0.5 * sum (y - target)^2 w.r.t. every weight and bias.
MlpGradients compute_gradients(const MlpModel& model,
                               const std::vector<double>& x,
                               const std::vector<double>& target);

/// One in-place gradient-descent step; returns the pre-update sample error
/// 0.5 * sum (y - target)^2.
double backprop_step(MlpModel& model, const std::vector<double>& x,
                     const std::vector<double>& target, double learning_rate);

struct TrainSample {
    std::vector<double> x;
    std::vector<double> target;
};

struct TrainResult {
    MlpModel model;
    std::vector<double> mse_history; // one entry per epoch run
    long epochs_run = 0;
    double final_mse = 0.0;
};

/**
 * @brief Online gradient-descent training.
 *
 * Each epoch visits every sample once in a freshly shuffled order
 * (Fisher-Yates over the xorshift64* stream, seeded with
 * derive_seed(cfg.seed, 1) so it is decoupled from weight
 * initialization). Epoch MSE is the mean over samples and output units of
 * the squared error, accumulated from the pre-update sample errors.
 * Training stops when that MSE reaches cfg.target_error or after
 * cfg.max_epochs epochs. Learning rates above 1 trigger a stderr warning.
 */
TrainResult train(MlpModel model, const std::vector<TrainSample>& dataset,
                  const TrainConfig& cfg);

struct Classification {
    ExpressionLabel label;
    std::array<double, kLabelCount> outputs;
};

/// Argmax over the 7 output activations; ties go to the lowest index.
Classification classify(const MlpModel& model, const std::vector<double>& x);

} // namespace fxc

#endif
