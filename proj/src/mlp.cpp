// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#include "fxc/mlp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "fxc/rng.hpp"

namespace fxc {

const char* label_name(ExpressionLabel label) {
    switch (label) {
        case ExpressionLabel::Anger: return "Anger";
        case ExpressionLabel::Fear: return "Fear";
        case ExpressionLabel::Surprise: return "Surprise";
        case ExpressionLabel::Sadness: return "Sadness";
        case ExpressionLabel::Happiness: return "Happiness";
        case ExpressionLabel::Disgust: return "Disgust";
        case ExpressionLabel::Neutral: return "Neutral";
    }
    return "?";
}

std::optional<ExpressionLabel> parse_label(const std::string& name) {
    std::string s;
    for (char c : name)
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "anger") return ExpressionLabel::Anger;
    if (s == "fear") return ExpressionLabel::Fear;
    if (s == "surprise") return ExpressionLabel::Surprise;
    if (s == "sadness" || s == "sad") return ExpressionLabel::Sadness;
    if (s == "happiness" || s == "happy" || s == "joy")
        return ExpressionLabel::Happiness;
    if (s == "disgust") return ExpressionLabel::Disgust;
    if (s == "neutral") return ExpressionLabel::Neutral;
    return std::nullopt;
}

std::optional<ExpressionLabel> label_from_jaffe_filename(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find('.');
    if (dot == std::string::npos || base.size() < dot + 3) return std::nullopt;
    std::string code = base.substr(dot + 1, 2);
    for (char& c : code) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (code == "AN") return ExpressionLabel::Anger;
    if (code == "DI") return ExpressionLabel::Disgust;
    if (code == "FE") return ExpressionLabel::Fear;
    if (code == "HA") return ExpressionLabel::Happiness;
    if (code == "NE") return ExpressionLabel::Neutral;
    if (code == "SA") return ExpressionLabel::Sadness;
    if (code == "SU") return ExpressionLabel::Surprise;
    return std::nullopt;
}

double sigmoid(double t) {
    if (t >= 0.0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    double e = std::exp(t);
    return e / (1.0 + e);
}

MlpModel init_weights(const std::vector<int>& topology, std::uint64_t seed) {
    if (topology.size() < 2)
        throw std::invalid_argument("init_weights: topology needs at least two layers");
    for (int size : topology)
        if (size < 1)
            throw std::invalid_argument("init_weights: layer sizes must be >= 1");

    MlpModel model;
    model.topology = topology;
    Rng rng(seed);
    for (std::size_t l = 1; l < topology.size(); ++l) {
        MlpLayer layer;
        layer.in = topology[l - 1];
        layer.out = topology[l];
        layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
        layer.bias.resize(layer.out);
        for (int i = 0; i < layer.out; ++i) {
            for (int j = 0; j < layer.in; ++j)
                layer.weights[static_cast<std::size_t>(i) * layer.in + j] =
                    rng.next_double() - 0.5;
            layer.bias[i] = rng.next_double() - 0.5;
        }
        model.layers.push_back(std::move(layer));
    }
    return model;
}

std::vector<std::vector<double>> forward(const MlpModel& model,
                                         const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(model.input_size()))
        throw std::invalid_argument("forward: input length " +
                                    std::to_string(x.size()) + " != n_in=" +
                                    std::to_string(model.input_size()));
    std::vector<std::vector<double>> activations;
    activations.reserve(model.layers.size() + 1);
    activations.push_back(x);
    for (const MlpLayer& layer : model.layers) {
        const std::vector<double>& prev = activations.back();
        std::vector<double> next(layer.out);
        for (int i = 0; i < layer.out; ++i) {
            double s = layer.bias[i];
            const double* w = layer.weights.data() +
                              static_cast<std::size_t>(i) * layer.in;
            for (int j = 0; j < layer.in; ++j) s += prev[j] * w[j];
            next[i] = sigmoid(s);
        }
        activations.push_back(std::move(next));
    }
    return activations;
}

std::vector<double> forward_output(const MlpModel& model,
                                   const std::vector<double>& x) {
    return forward(model, x).back();
}

MlpGradients compute_gradients(const MlpModel& model,
                               const std::vector<double>& x,
                               const std::vector<double>& target) {
    if (target.size() != static_cast<std::size_t>(model.output_size()))
        throw std::invalid_argument("compute_gradients: target length " +
                                    std::to_string(target.size()) + " != n_out=" +
                                    std::to_string(model.output_size()));
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument("compute_gradients: non-finite input");
    for (double v : target)
        if (!std::isfinite(v))
            throw std::invalid_argument("compute_gradients: non-finite target");

    auto activations = forward(model, x);
    const std::vector<double>& y = activations.back();

    MlpGradients grads;
    grads.layers.resize(model.layers.size());

    // delta_i = dE/ds_i; output layer: (y - t) * y * (1 - y)
    std::vector<double> delta(y.size());
    for (std::size_t kk = 0; kk < y.size(); ++kk) {
        double diff = y[kk] - target[kk];
        grads.error += 0.5 * diff * diff;
        delta[kk] = diff * y[kk] * (1.0 - y[kk]);
    }

    for (std::size_t l = model.layers.size(); l-- > 0;) {
        const MlpLayer& layer = model.layers[l];
        const std::vector<double>& prev = activations[l];
        MlpLayer& g = grads.layers[l];
        g.in = layer.in;
        g.out = layer.out;
        g.weights.resize(layer.weights.size());
        g.bias.resize(layer.bias.size());
        for (int i = 0; i < layer.out; ++i) {
            double d = delta[i];
            g.bias[i] = d;
            double* gw = g.weights.data() + static_cast<std::size_t>(i) * layer.in;
            for (int j = 0; j < layer.in; ++j) gw[j] = d * prev[j];
        }
        if (l > 0) {
            std::vector<double> prev_delta(layer.in, 0.0);
            for (int j = 0; j < layer.in; ++j) {
                double s = 0.0;
                for (int i = 0; i < layer.out; ++i)
                    s += delta[i] *
                         layer.weights[static_cast<std::size_t>(i) * layer.in + j];
                prev_delta[j] = s * prev[j] * (1.0 - prev[j]);
            }
            delta = std::move(prev_delta);
        }
    }
    return grads;
}

double backprop_step(MlpModel& model, const std::vector<double>& x,
                     const std::vector<double>& target, double learning_rate) {
    MlpGradients grads = compute_gradients(model, x, target);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        MlpLayer& layer = model.layers[l];
        const MlpLayer& g = grads.layers[l];
        for (std::size_t i = 0; i < layer.weights.size(); ++i)
            layer.weights[i] -= learning_rate * g.weights[i];
        for (std::size_t i = 0; i < layer.bias.size(); ++i)
            layer.bias[i] -= learning_rate * g.bias[i];
    }
    return grads.error;
}

TrainResult train(MlpModel model, const std::vector<TrainSample>& dataset,
                  const TrainConfig& cfg) {
    if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
    if (!(cfg.learning_rate > 0.0))
        throw std::invalid_argument("train: learning rate must be positive");
    if (cfg.learning_rate > 1.0)
        std::cerr << "warning: learning rate " << cfg.learning_rate
                  << " is outside the usual (0, 1] range\n";
    if (cfg.max_epochs < 1)
        throw std::invalid_argument("train: max_epochs must be >= 1");
    if (cfg.target_error < 0.0)
        throw std::invalid_argument("train: target_error must be >= 0");

    const std::size_t n_out = dataset.front().target.size();
    Rng shuffle_rng(derive_seed(cfg.seed, 1));
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    result.mse_history.reserve(
        static_cast<std::size_t>(std::min<long>(cfg.max_epochs, 1 << 20)));
    for (long epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double sq_sum = 0.0;
        for (std::size_t idx : order) {
            const TrainSample& sample = dataset[idx];
            sq_sum += 2.0 * backprop_step(model, sample.x, sample.target,
                                          cfg.learning_rate);
        }
        double mse = sq_sum / (static_cast<double>(dataset.size()) *
                               static_cast<double>(n_out));
        result.mse_history.push_back(mse);
        result.epochs_run = epoch + 1;
        result.final_mse = mse;
        if (mse <= cfg.target_error) break;
    }
    result.model = std::move(model);
    return result;
}

Classification classify(const MlpModel& model, const std::vector<double>& x) {
    if (model.output_size() != kLabelCount)
        throw std::invalid_argument("classify: model has " +
                                    std::to_string(model.output_size()) +
                                    " outputs, expected " +
                                    std::to_string(kLabelCount));
    std::vector<double> y = forward_output(model, x);
    Classification c{ExpressionLabel::Anger, {}};
    int best = 0;
    for (int i = 0; i < kLabelCount; ++i) {
        c.outputs[i] = y[i];
        if (y[i] > y[best]) best = i;
    }
    c.label = static_cast<ExpressionLabel>(best);
    return c;
}

} // namespace fxc
