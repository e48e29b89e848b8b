// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#include "fxc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fxc/rng.hpp"

namespace fxc {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

bool DatasetManifest::has_tags() const {
    for (const ManifestRecord& r : records)
        if (r.split != SplitTag::None) return true;
    return false;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();

    DatasetManifest manifest;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == "path,label,split" || line == "path,label") continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (fields.size() < 2 || fields.size() > 3)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected `path,label[,split]`");
        ManifestRecord rec;
        std::filesystem::path p(fields[0]);
        rec.path = p.is_absolute() ? p.string() : (base / p).string();
        auto label = parse_label(fields[1]);
        if (!label)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown label \"" + fields[1] + "\"");
        rec.label = *label;
        if (fields.size() == 3 && !fields[2].empty()) {
            if (fields[2] == "train") rec.split = SplitTag::Train;
            else if (fields[2] == "test") rec.split = SplitTag::Test;
            else
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": split must be empty, train or test");
        }
        manifest.records.push_back(std::move(rec));
    }
    for (std::size_t i = 0; i < manifest.records.size(); ++i)
        for (std::size_t j = i + 1; j < manifest.records.size(); ++j)
            if (manifest.records[i].path == manifest.records[j].path)
                throw std::runtime_error(path + ": duplicate image path " +
                                         manifest.records[i].path);
    return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << "path,label,split\n";
    for (const ManifestRecord& r : manifest.records) {
        out << r.path << ',' << label_name(r.label) << ',';
        if (r.split == SplitTag::Train) out << "train";
        else if (r.split == SplitTag::Test) out << "test";
        out << '\n';
    }
    if (!out) throw std::runtime_error("short write on manifest: " + path);
}

Rect resolve_crop(const GrayImage& img, const PreprocessConfig& pre,
                  const RegionLayout& layout) {
    if (pre.crop) {
        if (!rect_inside(*pre.crop, img.width, img.height))
            throw std::invalid_argument("face crop rect out of bounds for " +
                                        std::to_string(img.width) + "x" +
                                        std::to_string(img.height) + " image");
        return *pre.crop;
    }
    if (img.width == layout.face_width && img.height == layout.face_height)
        return Rect{0, 0, img.width, img.height};
    if (img.width < layout.face_width || img.height < layout.face_height)
        throw std::invalid_argument(
            "image " + std::to_string(img.width) + "x" +
            std::to_string(img.height) + " is smaller than the face size " +
            std::to_string(layout.face_width) + "x" +
            std::to_string(layout.face_height) + " and no crop rect was given");
    return Rect{(img.width - layout.face_width) / 2,
                (img.height - layout.face_height) / 2, layout.face_width,
                layout.face_height};
}

GrayImage preprocess_face(const GrayImage& img, const PreprocessConfig& pre,
                          const RegionLayout& layout) {
    GrayImage face = crop(img, resolve_crop(img, pre, layout));
    if (face.width != layout.face_width || face.height != layout.face_height)
        throw std::invalid_argument("face crop is " + std::to_string(face.width) +
                                    "x" + std::to_string(face.height) +
                                    " but the region layout expects " +
                                    std::to_string(layout.face_width) + "x" +
                                    std::to_string(layout.face_height));
    return histogram_equalize(face);
}

RegionSet image_regions(const GrayImage& img, const PreprocessConfig& pre,
                        const RegionLayout& layout) {
    GrayImage face = preprocess_face(img, pre, layout);
    EdgeMap edges = canny(face, pre.canny);
    return extract_all(face, edges, layout);
}

Normalizer fit_normalizer(const std::vector<std::vector<double>>& features) {
    if (features.empty())
        throw std::invalid_argument("fit_normalizer: no feature vectors");
    const std::size_t dim = features[0].size();
    Normalizer norm;
    norm.mean.assign(dim, 0.0);
    norm.stddev.assign(dim, 0.0);
    for (const auto& f : features) {
        if (f.size() != dim)
            throw std::invalid_argument("fit_normalizer: inconsistent dimensions");
        for (std::size_t i = 0; i < dim; ++i) norm.mean[i] += f[i];
    }
    for (double& v : norm.mean) v /= static_cast<double>(features.size());
    for (const auto& f : features)
        for (std::size_t i = 0; i < dim; ++i) {
            double d = f[i] - norm.mean[i];
            norm.stddev[i] += d * d;
        }
    for (std::size_t i = 0; i < dim; ++i) {
        norm.stddev[i] = std::sqrt(norm.stddev[i] / static_cast<double>(features.size()));
        if (norm.stddev[i] < 1e-12) {
            norm.stddev[i] = 1.0;
            norm.degenerate_dims.push_back(static_cast<int>(i));
        }
    }
    return norm;
}

std::vector<double> apply_normalizer(const Normalizer& norm,
                                     const std::vector<double>& v) {
    if (v.size() != norm.mean.size())
        throw std::invalid_argument("apply_normalizer: dimension mismatch");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = (v[i] - norm.mean[i]) / norm.stddev[i];
    return out;
}

namespace {

struct RawFeatures {
    std::vector<std::array<std::vector<double>, kRegionCount>> patches;
    std::vector<ExpressionLabel> labels;
    std::vector<std::string> paths;
};

RawFeatures collect_patches(const DatasetManifest& manifest,
                            const RegionLayout& layout,
                            const PreprocessConfig& pre) {
    RawFeatures raw;
    for (const ManifestRecord& rec : manifest.records) {
        try {
            GrayImage img = load_pgm_file(rec.path);
            RegionSet set = image_regions(img, pre, layout);
            std::array<std::vector<double>, kRegionCount> patches;
            for (int r = 0; r < kRegionCount; ++r)
                patches[r] = std::move(set.patches[r].values);
            raw.patches.push_back(std::move(patches));
            raw.labels.push_back(rec.label);
            raw.paths.push_back(rec.path);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("feature extraction failed for " + rec.path +
                                     ": " + e.what());
        }
    }
    return raw;
}

std::vector<double> concat_projections(
    const std::array<PcaModel, kRegionCount>& pca,
    const std::array<std::vector<double>, kRegionCount>& patches) {
    std::vector<double> feature;
    feature.reserve(static_cast<std::size_t>(pca[0].k) * kRegionCount);
    for (int r = 0; r < kRegionCount; ++r) {
        std::vector<double> y = pca_project(pca[r], patches[r]);
        feature.insert(feature.end(), y.begin(), y.end());
    }
    return feature;
}

} // namespace

BuiltFeatures build_features(const DatasetManifest& train_manifest,
                             const DatasetManifest& test_manifest,
                             const RegionLayout& layout,
                             const PreprocessConfig& pre,
                             int components_per_region) {
    if (train_manifest.records.empty())
        throw std::invalid_argument("build_features: empty training manifest");

    RawFeatures train_raw = collect_patches(train_manifest, layout, pre);
    RawFeatures test_raw = collect_patches(test_manifest, layout, pre);

    BuiltFeatures built;
    for (int r = 0; r < kRegionCount; ++r) {
        std::vector<std::vector<double>> samples;
        samples.reserve(train_raw.patches.size());
        for (const auto& p : train_raw.patches) samples.push_back(p[r]);
        try {
            built.pca[r] = pca_fit(samples, components_per_region);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(
                "PCA fit failed for region \"" + layout.regions[r].name +
                "\" (" + std::to_string(samples.size()) +
                " training images): " + e.what());
        }
    }

    std::vector<std::vector<double>> train_features;
    train_features.reserve(train_raw.patches.size());
    for (const auto& p : train_raw.patches)
        train_features.push_back(concat_projections(built.pca, p));
    built.normalizer = fit_normalizer(train_features);

    built.train.y = std::move(train_raw.labels);
    built.train.paths = std::move(train_raw.paths);
    for (const auto& f : train_features)
        built.train.x.push_back(apply_normalizer(built.normalizer, f));

    built.test.y = std::move(test_raw.labels);
    built.test.paths = std::move(test_raw.paths);
    for (const auto& p : test_raw.patches)
        built.test.x.push_back(
            apply_normalizer(built.normalizer, concat_projections(built.pca, p)));
    return built;
}

std::pair<DatasetManifest, DatasetManifest> split_manifest(
    const DatasetManifest& manifest, std::uint64_t seed, int per_class_test) {
    if (per_class_test < 0)
        throw std::invalid_argument("split: per-class test count must be >= 0");

    std::array<std::vector<std::size_t>, kLabelCount> by_class;
    for (std::size_t i = 0; i < manifest.records.size(); ++i)
        by_class[static_cast<int>(manifest.records[i].label)].push_back(i);

    std::vector<char> is_test(manifest.records.size(), 0);
    for (int c = 0; c < kLabelCount; ++c) {
        auto& indices = by_class[c];
        if (indices.empty() && per_class_test == 0) continue;
        if (static_cast<long>(indices.size()) <= per_class_test)
            throw std::invalid_argument(
                std::string("split: class ") +
                label_name(static_cast<ExpressionLabel>(c)) + " has " +
                std::to_string(indices.size()) + " images, need more than " +
                std::to_string(per_class_test));
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(indices);
        for (int t = 0; t < per_class_test; ++t) is_test[indices[t]] = 1;
    }

    std::pair<DatasetManifest, DatasetManifest> out;
    for (std::size_t i = 0; i < manifest.records.size(); ++i) {
        ManifestRecord rec = manifest.records[i];
        rec.split = is_test[i] ? SplitTag::Test : SplitTag::Train;
        (is_test[i] ? out.second : out.first).records.push_back(std::move(rec));
    }
    return out;
}

std::pair<DatasetManifest, DatasetManifest> split_by_tags(
    const DatasetManifest& manifest) {
    std::pair<DatasetManifest, DatasetManifest> out;
    for (const ManifestRecord& rec : manifest.records) {
        if (rec.split == SplitTag::None)
            throw std::invalid_argument(
                "manifest mixes tagged and untagged records (" + rec.path +
                " has no split tag)");
        (rec.split == SplitTag::Test ? out.second : out.first)
            .records.push_back(rec);
    }
    return out;
}

std::vector<TrainSample> to_train_samples(const FeatureDataset& data) {
    std::vector<TrainSample> samples;
    samples.reserve(data.x.size());
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        TrainSample s;
        s.x = data.x[i];
        s.target.assign(kLabelCount, 0.0);
        s.target[static_cast<int>(data.y[i])] = 1.0;
        samples.push_back(std::move(s));
    }
    return samples;
}

EvalReport evaluate(const ExpressionModel& model, const FeatureDataset& test) {
    if (test.x.empty()) throw std::invalid_argument("evaluate: empty test set");
    EvalReport report;
    int correct_total = 0;
    for (std::size_t i = 0; i < test.x.size(); ++i) {
        Classification c = classify(model.mlp, test.x[i]);
        int t = static_cast<int>(test.y[i]);
        int p = static_cast<int>(c.label);
        ++report.confusion[t][p];
        ++report.totals[t];
        if (t == p) {
            ++report.correct[t];
            ++correct_total;
        }
    }
    int classes_present = 0;
    double acc_sum = 0.0;
    for (int c = 0; c < kLabelCount; ++c) {
        if (report.totals[c] > 0) {
            report.per_class[c] = 100.0 * report.correct[c] / report.totals[c];
            acc_sum += report.per_class[c];
            ++classes_present;
        }
    }
    report.average = classes_present > 0 ? acc_sum / classes_present : 0.0;
    report.pooled = 100.0 * correct_total / static_cast<double>(test.x.size());
    return report;
}

std::vector<double> image_features(const ExpressionModel& model,
                                   const GrayImage& img) {
    RegionSet set = image_regions(img, model.preprocess, model.layout);
    std::array<std::vector<double>, kRegionCount> patches;
    for (int r = 0; r < kRegionCount; ++r)
        patches[r] = std::move(set.patches[r].values);
    return apply_normalizer(model.normalizer,
                            concat_projections(model.pca, patches));
}

EvalReport evaluate_manifest(const ExpressionModel& model,
                             const DatasetManifest& manifest) {
    FeatureDataset data;
    for (const ManifestRecord& rec : manifest.records) {
        GrayImage img = load_pgm_file(rec.path);
        try {
            data.x.push_back(image_features(model, img));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("feature extraction failed for " + rec.path +
                                     ": " + e.what());
        }
        data.y.push_back(rec.label);
        data.paths.push_back(rec.path);
    }
    return evaluate(model, data);
}

Classification classify_image(const ExpressionModel& model,
                              const GrayImage& img) {
    return classify(model.mlp, image_features(model, img));
}

GridResult grid_search(const BuiltFeatures& features,
                       const std::vector<int>& hidden_counts,
                       const std::vector<double>& rates, long max_epochs,
                       double target_error, std::uint64_t seed, int jobs) {
    if (hidden_counts.empty() || rates.empty())
        throw std::invalid_argument("grid_search: empty hidden or rate grid");
    if (features.test.x.empty())
        throw std::invalid_argument("grid_search: empty held-out set");

    std::vector<TrainSample> samples = to_train_samples(features.train);
    const int n_in = static_cast<int>(samples.front().x.size());

    GridResult result;
    result.cells.resize(hidden_counts.size() * rates.size());

    auto run_cell = [&](std::size_t index) {
        std::size_t hi = index / rates.size();
        std::size_t ri = index % rates.size();
        GridCell& cell = result.cells[index];
        cell.hidden = hidden_counts[hi];
        cell.rate = rates[ri];

        TrainConfig cfg;
        cfg.learning_rate = cell.rate;
        cfg.max_epochs = max_epochs;
        cfg.target_error = target_error;
        cfg.seed = derive_seed(seed, index);
        MlpModel net = init_weights({n_in, cell.hidden, kLabelCount}, cfg.seed);
        TrainResult trained = train(std::move(net), samples, cfg);

        int hits = 0;
        for (std::size_t i = 0; i < features.test.x.size(); ++i) {
            Classification c = classify(trained.model, features.test.x[i]);
            if (c.label == features.test.y[i]) ++hits;
        }
        cell.accuracy = 100.0 * hits / static_cast<double>(features.test.x.size());
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < result.cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> cursor{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= result.cells.size()) break;
                run_cell(i);
            }
        };
        std::vector<std::thread> pool;
        int n = std::min<int>(jobs, static_cast<int>(result.cells.size()));
        pool.reserve(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 1; i < result.cells.size(); ++i)
        if (result.cells[i].accuracy > result.cells[result.best_index].accuracy)
            result.best_index = i;
    return result;
}

} // namespace fxc
