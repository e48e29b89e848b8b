// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fxc/pipeline.hpp"

namespace fxc {

namespace {

using nlohmann::json;

constexpr int kModelVersion = 1;

json rect_to_json(const Rect& r) {
    return json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
}

Rect rect_from_json(const json& j) {
    return Rect{j.at("x").get<int>(), j.at("y").get<int>(),
                j.at("w").get<int>(), j.at("h").get<int>()};
}

json layout_to_json(const RegionLayout& layout) {
    json regions = json::array();
    for (const RegionSpec& r : layout.regions)
        regions.push_back(json{{"name", r.name},
                               {"window", rect_to_json(r.window)},
                               {"patch_w", r.patch_w},
                               {"patch_h", r.patch_h}});
    return json{{"face_width", layout.face_width},
                {"face_height", layout.face_height},
                {"regions", regions}};
}

RegionLayout layout_from_json(const json& j) {
    RegionLayout layout;
    layout.face_width = j.at("face_width").get<int>();
    layout.face_height = j.at("face_height").get<int>();
    const json& regions = j.at("regions");
    if (regions.size() != kRegionCount)
        throw std::runtime_error("layout must define exactly 5 regions");
    for (int i = 0; i < kRegionCount; ++i) {
        const json& r = regions.at(i);
        layout.regions[i].name = r.at("name").get<std::string>();
        layout.regions[i].window = rect_from_json(r.at("window"));
        layout.regions[i].patch_w = r.at("patch_w").get<int>();
        layout.regions[i].patch_h = r.at("patch_h").get<int>();
    }
    layout.validate();
    return layout;
}

json pca_to_json(const PcaModel& m) {
    return json{{"n", m.n},
                {"k", m.k},
                {"mean", m.mean},
                {"eigenvalues", m.eigenvalues},
                {"components", m.components}};
}

PcaModel pca_from_json(const json& j) {
    PcaModel m;
    m.n = j.at("n").get<int>();
    m.k = j.at("k").get<int>();
    m.mean = j.at("mean").get<std::vector<double>>();
    m.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    m.components = j.at("components").get<std::vector<std::vector<double>>>();
    if (m.mean.size() != static_cast<std::size_t>(m.n) ||
        m.eigenvalues.size() != static_cast<std::size_t>(m.k) ||
        m.components.size() != static_cast<std::size_t>(m.k))
        throw std::runtime_error("PCA block has inconsistent dimensions");
    for (const auto& c : m.components)
        if (c.size() != static_cast<std::size_t>(m.n))
            throw std::runtime_error("PCA component has wrong length");
    return m;
}

json canny_to_json(const CannyConfig& c) {
    json j;
    j["low"] = c.low ? json(*c.low) : json(nullptr);
    j["high"] = c.high ? json(*c.high) : json(nullptr);
    return j;
}

CannyConfig canny_from_json(const json& j) {
    CannyConfig c;
    if (j.contains("low") && !j.at("low").is_null())
        c.low = j.at("low").get<double>();
    if (j.contains("high") && !j.at("high").is_null())
        c.high = j.at("high").get<double>();
    return c;
}

} // namespace

std::string model_to_json(const ExpressionModel& model) {
    json j;
    j["version"] = model.version;
    j["crop"] = model.preprocess.crop ? rect_to_json(*model.preprocess.crop)
                                      : json(nullptr);
    j["canny"] = canny_to_json(model.preprocess.canny);
    j["layout"] = layout_to_json(model.layout);
    json pca = json::array();
    for (const PcaModel& m : model.pca) pca.push_back(pca_to_json(m));
    j["pca"] = pca;
    j["normalizer"] = json{{"mean", model.normalizer.mean},
                           {"stddev", model.normalizer.stddev},
                           {"degenerate_dims", model.normalizer.degenerate_dims}};
    json layers = json::array();
    for (const MlpLayer& l : model.mlp.layers)
        layers.push_back(json{{"in", l.in},
                              {"out", l.out},
                              {"weights", l.weights},
                              {"bias", l.bias}});
    j["mlp"] = json{{"topology", model.mlp.topology}, {"layers", layers}};
    json labels = json::array();
    for (int i = 0; i < kLabelCount; ++i)
        labels.push_back(label_name(static_cast<ExpressionLabel>(i)));
    j["labels"] = labels;
    j["training"] = json{{"rate", model.training.rate},
                         {"hidden", model.training.hidden},
                         {"epochs_run", model.training.epochs_run},
                         {"final_mse", model.training.final_mse},
                         {"seed", model.training.seed}};
    return j.dump(2) + "\n";
}

ExpressionModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("model file is not valid JSON: ") +
                                 e.what());
    }
    try {
        int version = j.at("version").get<int>();
        if (version != kModelVersion)
            throw std::runtime_error("unsupported model file version " +
                                     std::to_string(version) + " (expected " +
                                     std::to_string(kModelVersion) + ")");

        ExpressionModel model;
        model.version = version;
        if (!j.at("crop").is_null())
            model.preprocess.crop = rect_from_json(j.at("crop"));
        model.preprocess.canny = canny_from_json(j.at("canny"));
        model.layout = layout_from_json(j.at("layout"));

        const json& pca = j.at("pca");
        if (pca.size() != kRegionCount)
            throw std::runtime_error("model must carry exactly 5 PCA blocks");
        int feature_dim = 0;
        for (int i = 0; i < kRegionCount; ++i) {
            model.pca[i] = pca_from_json(pca.at(i));
            const RegionSpec& spec = model.layout.regions[i];
            if (model.pca[i].n != spec.patch_w * spec.patch_h)
                throw std::runtime_error("PCA input dimension does not match region \"" +
                                         spec.name + "\" patch size");
            feature_dim += model.pca[i].k;
        }

        const json& nj = j.at("normalizer");
        model.normalizer.mean = nj.at("mean").get<std::vector<double>>();
        model.normalizer.stddev = nj.at("stddev").get<std::vector<double>>();
        model.normalizer.degenerate_dims =
            nj.at("degenerate_dims").get<std::vector<int>>();
        if (model.normalizer.mean.size() != static_cast<std::size_t>(feature_dim) ||
            model.normalizer.stddev.size() != static_cast<std::size_t>(feature_dim))
            throw std::runtime_error("normalizer length does not match the PCA output dimension");
        for (double s : model.normalizer.stddev)
            if (!(s > 0.0))
                throw std::runtime_error("normalizer carries a non-positive standard deviation");

        const json& mj = j.at("mlp");
        model.mlp.topology = mj.at("topology").get<std::vector<int>>();
        if (model.mlp.topology.size() < 2)
            throw std::runtime_error("MLP topology needs at least two layers");
        if (model.mlp.topology.front() != feature_dim)
            throw std::runtime_error(
                "MLP input size " + std::to_string(model.mlp.topology.front()) +
                " does not match the PCA output dimension " +
                std::to_string(feature_dim));
        if (model.mlp.topology.back() != kLabelCount)
            throw std::runtime_error("MLP must have exactly 7 outputs");
        const json& layers = mj.at("layers");
        if (layers.size() + 1 != model.mlp.topology.size())
            throw std::runtime_error("MLP layer count does not match its topology");
        for (std::size_t l = 0; l < layers.size(); ++l) {
            MlpLayer layer;
            layer.in = layers.at(l).at("in").get<int>();
            layer.out = layers.at(l).at("out").get<int>();
            layer.weights = layers.at(l).at("weights").get<std::vector<double>>();
            layer.bias = layers.at(l).at("bias").get<std::vector<double>>();
            if (layer.in != model.mlp.topology[l] ||
                layer.out != model.mlp.topology[l + 1] ||
                layer.weights.size() !=
                    static_cast<std::size_t>(layer.in) * layer.out ||
                layer.bias.size() != static_cast<std::size_t>(layer.out))
                throw std::runtime_error("MLP layer " + std::to_string(l) +
                                         " has inconsistent dimensions");
            for (double w : layer.weights)
                if (!std::isfinite(w))
                    throw std::runtime_error("MLP carries a non-finite weight");
            for (double b : layer.bias)
                if (!std::isfinite(b))
                    throw std::runtime_error("MLP carries a non-finite bias");
            model.mlp.layers.push_back(std::move(layer));
        }

        const json& labels = j.at("labels");
        if (labels.size() != kLabelCount)
            throw std::runtime_error("model must list exactly 7 labels");
        for (int i = 0; i < kLabelCount; ++i)
            if (labels.at(i).get<std::string>() !=
                label_name(static_cast<ExpressionLabel>(i)))
                throw std::runtime_error("label mapping differs from the fixed output order");

        const json& t = j.at("training");
        model.training.rate = t.at("rate").get<double>();
        model.training.hidden = t.at("hidden").get<int>();
        model.training.epochs_run = t.at("epochs_run").get<long>();
        model.training.final_mse = t.at("final_mse").get<double>();
        model.training.seed = t.at("seed").get<std::uint64_t>();
        return model;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const ExpressionModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << model_to_json(model);
    if (!out) throw std::runtime_error("short write on model file: " + path);
}

ExpressionModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    try {
        return model_from_json(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": not valid JSON: " + e.what());
    }
    try {
        PipelineConfig cfg;
        if (j.contains("crop") && !j.at("crop").is_null())
            cfg.pre.crop = rect_from_json(j.at("crop"));
        if (j.contains("canny")) cfg.pre.canny = canny_from_json(j.at("canny"));
        if (j.contains("layout")) cfg.layout = layout_from_json(j.at("layout"));
        return cfg;
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": malformed config: " + e.what());
    }
}

} // namespace fxc
