// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#ifndef FXC_PIPELINE_HPP
#define FXC_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fxc/canny.hpp"
#include "fxc/image.hpp"
#include "fxc/mlp.hpp"
#include "fxc/pca.hpp"
#include "fxc/regions.hpp"

namespace fxc {

inline constexpr int kComponentsPerRegion = 40;
inline constexpr int kFeatureDim = kComponentsPerRegion * kRegionCount; // 200

enum class SplitTag { None, Train, Test };

struct ManifestRecord {
    std::string path;
    ExpressionLabel label;
    SplitTag split = SplitTag::None;
};

struct DatasetManifest {
    std::vector<ManifestRecord> records;

    bool has_tags() const;
};

/**
 * @brief Manifest CSV: header `path,label,split`, one record per line.
 *
 * The split column may be empty, `train` or `test`. Relative paths are
 * resolved against the manifest file's directory on load.
 */
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

/// Crop policy + Canny thresholds for the preprocessing front.
struct PreprocessConfig {
    /// Explicit face crop; when unset, images already at the layout's face
    /// size pass through and larger images get a centered face-size crop.
    std::optional<Rect> crop;
    CannyConfig canny;
};

/// Crop rect an image will get under this config (throws when the image
/// is smaller than the face size and no explicit rect fits).
Rect resolve_crop(const GrayImage& img, const PreprocessConfig& pre,
                  const RegionLayout& layout);

/// crop -> histogram equalization.
GrayImage preprocess_face(const GrayImage& img, const PreprocessConfig& pre,
                          const RegionLayout& layout);

/// Full per-image front end: preprocess, Canny, locate + extract patches.
RegionSet image_regions(const GrayImage& img, const PreprocessConfig& pre,
                        const RegionLayout& layout);

/// Per-dimension z-score parameters fitted on training features.
/// Dimensions whose standard deviation falls below 1e-12 get std 1 and are
/// listed in degenerate_dims.
struct Normalizer {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<int> degenerate_dims;
};

Normalizer fit_normalizer(const std::vector<std::vector<double>>& features);
std::vector<double> apply_normalizer(const Normalizer& norm,
                                     const std::vector<double>& v);

struct FeatureDataset {
    std::vector<std::vector<double>> x; // normalized feature vectors
    std::vector<ExpressionLabel> y;
    std::vector<std::string> paths;
};

struct BuiltFeatures {
    std::array<PcaModel, kRegionCount> pca;
    Normalizer normalizer;
    FeatureDataset train;
    FeatureDataset test;
};

/**
 * @brief Dataset ingestion: images -> region patches -> PCA -> features.
 *
 * PCA bases (k components per region) and the normalizer are fitted on
 * the training manifest only; both manifests are then projected and
 * normalized. Failures carry the offending image path.
 */
BuiltFeatures build_features(const DatasetManifest& train_manifest,
                             const DatasetManifest& test_manifest,
                             const RegionLayout& layout,
                             const PreprocessConfig& pre,
                             int components_per_region = kComponentsPerRegion);

/**
 * @brief Stratified split: exactly per_class_test test records per class,
 * chosen by a seeded shuffle; the rest are train. Output manifests keep
 * the input record order. Throws when a class has too few records.
 */
std::pair<DatasetManifest, DatasetManifest> split_manifest(
    const DatasetManifest& manifest, std::uint64_t seed, int per_class_test);

/// Partition by explicit split tags (every record must be tagged).
std::pair<DatasetManifest, DatasetManifest> split_by_tags(
    const DatasetManifest& manifest);

struct TrainingMeta {
    double rate = 0.0;
    int hidden = 0;
    long epochs_run = 0;
    double final_mse = 0.0;
    std::uint64_t seed = 0;
};

/// Persisted pipeline bundle: everything needed to classify one image.
struct ExpressionModel {
    int version = 1;
    PreprocessConfig preprocess;
    RegionLayout layout;
    std::array<PcaModel, kRegionCount> pca;
    Normalizer normalizer;
    MlpModel mlp;
    TrainingMeta training;
};

/// 7x7 confusion (rows true, columns predicted) with per-class and
/// aggregate accuracies. `average` is the unweighted mean of the per-class
/// accuracies over classes that have samples; `pooled` is correct/total
/// over all samples.
struct EvalReport {
    std::array<std::array<int, kLabelCount>, kLabelCount> confusion{};
    std::array<int, kLabelCount> totals{};
    std::array<int, kLabelCount> correct{};
    std::array<double, kLabelCount> per_class{};
    double average = 0.0;
    double pooled = 0.0;
};

EvalReport evaluate(const ExpressionModel& model, const FeatureDataset& test);

/// Build features for the manifest through the model's own PCA/normalizer
/// and evaluate.
EvalReport evaluate_manifest(const ExpressionModel& model,
                             const DatasetManifest& manifest);

/// Normalized 200-dim feature vector for one raw image.
std::vector<double> image_features(const ExpressionModel& model,
                                   const GrayImage& img);

Classification classify_image(const ExpressionModel& model,
                              const GrayImage& img);

struct GridCell {
    int hidden = 0;
    double rate = 0.0;
    double accuracy = 0.0; // pooled test accuracy, percent
};

struct GridResult {
    std::vector<GridCell> cells; // hidden-major, then rate, as listed
    std::size_t best_index = 0;  // first cell with maximal accuracy
};

/**
 * @brief Hyperparameter sweep over hidden-node counts and learning rates.
 *
 * Every cell trains an independent MLP on the training features with seed
 * derive_seed(seed, cell_index) and records the pooled accuracy on the
 * test features. `jobs` > 1 distributes cells over threads without
 * changing any result.
 */
GridResult grid_search(const BuiltFeatures& features,
                       const std::vector<int>& hidden_counts,
                       const std::vector<double>& rates, long max_epochs,
                       double target_error, std::uint64_t seed, int jobs = 1);

/// One-hot training samples from a feature dataset.
std::vector<TrainSample> to_train_samples(const FeatureDataset& data);

/// JSON round-trip of a model (version checked and invariants validated
/// on the way back in).
std::string model_to_json(const ExpressionModel& model);
ExpressionModel model_from_json(const std::string& text);

void save_model(const ExpressionModel& model, const std::string& path);
ExpressionModel load_model(const std::string& path);

/// Optional pipeline config file (JSON): any of "crop", "canny" and
/// "layout" may be present and overrides the built-in defaults.
struct PipelineConfig {
    PreprocessConfig pre;
    RegionLayout layout = default_layout();
};
PipelineConfig load_pipeline_config(const std::string& path);

/**
 * @brief Deterministic synthetic face corpus.
 *
 * Writes per_class 85x85 PGM faces per expression class into out_dir plus
 * a `manifest.csv`, and returns the manifest (paths resolved). Faces share
 * a fixed oval outline; eyebrow slope, eye openness and mouth
 * curvature/width vary by class with seeded per-image jitter, so the
 * classes are separable by construction. per_class must be >= 2. Already
 * written files are removed again if generation fails midway.
 */
DatasetManifest synth_dataset(std::uint64_t seed, int per_class,
                              const std::string& out_dir);

/// In-memory variant used by tests: images keyed by file name.
struct SynthImage {
    std::string name;
    ExpressionLabel label;
    GrayImage image;
};
std::vector<SynthImage> synth_images(std::uint64_t seed, int per_class);

} // namespace fxc

#endif
