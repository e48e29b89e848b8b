// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.
//
// fxc: facial expression classification toolkit.
//
// Subcommands: synth, prep, edges, train, grid, classify, eval.
// Exit status: 0 on success with all artifacts fully written, 1 on runtime
// failure (partial outputs are cleaned up), 2 on usage errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fxc/pipeline.hpp"
#include "fxc/reports.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

// Outputs go to `<path>.tmp` first and are renamed once complete, so a
// failed run never leaves a partial artifact behind.
class OutputSet {
public:
    std::string stage(const std::string& path) {
        std::string tmp = path + ".tmp";
        staged_.emplace_back(tmp, path);
        return tmp;
    }

    void commit() {
        for (auto& [tmp, path] : staged_)
            std::filesystem::rename(tmp, path);
        staged_.clear();
    }

    ~OutputSet() {
        std::error_code ec;
        for (auto& [tmp, path] : staged_)
            std::filesystem::remove(tmp, ec);
    }

private:
    std::vector<std::pair<std::string, std::string>> staged_;
};

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("short write on " + path);
}

struct CommonOpts {
    std::string config_path;
    std::vector<int> crop_values;
    double canny_low = -1.0;
    double canny_high = -1.0;

    fxc::PipelineConfig resolve() const {
        fxc::PipelineConfig cfg;
        if (!config_path.empty()) cfg = fxc::load_pipeline_config(config_path);
        if (!crop_values.empty())
            cfg.pre.crop = fxc::Rect{crop_values[0], crop_values[1],
                                     crop_values[2], crop_values[3]};
        if (canny_low >= 0.0) cfg.pre.canny.low = canny_low;
        if (canny_high >= 0.0) cfg.pre.canny.high = canny_high;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path,
                    "JSON config overriding crop/canny/layout defaults");
    cmd->add_option("--crop", opts.crop_values,
                    "face crop rect as `x y w h` (default: centered face-size crop)")
        ->expected(4);
    cmd->add_option("--low", opts.canny_low,
                    "absolute low hysteresis threshold (default: half of high)");
    cmd->add_option("--high", opts.canny_high,
                    "absolute high hysteresis threshold (default: 0.2 x peak gradient)");
}

void check_thresholds(const CommonOpts& opts) {
    if (opts.canny_low >= 0.0 && opts.canny_high >= 0.0 &&
        !(opts.canny_low > 0.0 && opts.canny_low < opts.canny_high))
        throw CLI::ValidationError("--low/--high",
                                   "thresholds must satisfy 0 < low < high");
}

// Train/test manifests for a command: explicit tags win, otherwise a
// seeded stratified split.
std::pair<fxc::DatasetManifest, fxc::DatasetManifest> resolve_split(
    const fxc::DatasetManifest& manifest, std::uint64_t seed,
    int per_class_test) {
    if (manifest.has_tags()) return fxc::split_by_tags(manifest);
    return fxc::split_manifest(manifest, seed, per_class_test);
}

int run_synth(const std::string& out_dir, int per_class, std::uint64_t seed) {
    fxc::DatasetManifest manifest = fxc::synth_dataset(seed, per_class, out_dir);
    std::cout << "wrote " << manifest.records.size() << " images and "
              << (std::filesystem::path(out_dir) / "manifest.csv").string()
              << "\n";
    return 0;
}

int run_prep(const std::string& image_path, const std::string& scan_dir,
             const std::string& out_path, const std::string& patches_dir,
             const CommonOpts& common) {
    OutputSet outputs;
    if (!scan_dir.empty()) {
        // manifest paths are resolved against the manifest's own directory,
        // so records must point back into the scan directory from there
        std::filesystem::path out_parent =
            std::filesystem::absolute(out_path).parent_path();
        std::filesystem::path scan_abs = std::filesystem::absolute(scan_dir);
        std::error_code ec;
        std::filesystem::path rel = std::filesystem::relative(scan_abs, out_parent, ec);
        std::filesystem::path prefix = (ec || rel.empty()) ? scan_abs : rel;

        fxc::DatasetManifest manifest;
        std::vector<std::string> names;
        for (const auto& entry : std::filesystem::directory_iterator(scan_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".pgm")
                names.push_back(entry.path().filename().string());
        std::sort(names.begin(), names.end());
        for (const std::string& name : names)
            if (auto label = fxc::label_from_jaffe_filename(name))
                manifest.records.push_back(fxc::ManifestRecord{
                    (prefix / name).lexically_normal().string(), *label,
                    fxc::SplitTag::None});
        if (manifest.records.empty())
            throw std::runtime_error("no JAFFE-coded .pgm files found in " +
                                     scan_dir);
        fxc::save_manifest(manifest, outputs.stage(out_path));
        outputs.commit();
        std::cout << "wrote " << manifest.records.size() << " records to "
                  << out_path << "\n";
        return 0;
    }
    fxc::PipelineConfig cfg = common.resolve();
    fxc::GrayImage img = fxc::load_pgm_file(image_path);
    fxc::GrayImage face = fxc::preprocess_face(img, cfg.pre, cfg.layout);
    fxc::save_pgm_file(face, outputs.stage(out_path));
    if (!patches_dir.empty()) {
        std::filesystem::create_directories(patches_dir);
        fxc::RegionSet set = fxc::image_regions(img, cfg.pre, cfg.layout);
        for (int r = 0; r < fxc::kRegionCount; ++r) {
            std::string path = (std::filesystem::path(patches_dir) /
                                (set.patches[r].name + ".pgm")).string();
            fxc::save_pgm_file(fxc::patch_to_image(set.patches[r]),
                               outputs.stage(path));
            std::printf("%-14s rect x=%d y=%d %dx%d -> %s\n",
                        set.patches[r].name.c_str(), set.rects[r].x,
                        set.rects[r].y, set.rects[r].w, set.rects[r].h,
                        path.c_str());
        }
    }
    outputs.commit();
    std::cout << "wrote " << face.width << "x" << face.height
              << " preprocessed face to " << out_path << "\n";
    return 0;
}

int run_edges(const std::string& image_path, const std::string& out_path,
              const CommonOpts& common) {
    fxc::PipelineConfig cfg = common.resolve();
    fxc::GrayImage img = fxc::load_pgm_file(image_path);
    fxc::Rect rect = fxc::resolve_crop(img, cfg.pre, cfg.layout);
    fxc::GrayImage face = fxc::histogram_equalize(fxc::crop(img, rect));
    fxc::EdgeMap edges = fxc::canny(face, cfg.pre.canny);

    OutputSet outputs;
    fxc::save_pgm_file(fxc::edges_to_image(edges), outputs.stage(out_path));
    outputs.commit();
    long count = 0;
    for (auto e : edges.edges) count += e;
    std::cout << count << " edge pixels -> " << out_path << "\n";
    return 0;
}

int run_train(const std::string& manifest_path, const std::string& model_path,
              const std::string& history_path, const std::string& train_out,
              const std::string& test_out, int hidden, double rate,
              double target_error, long max_epochs, int per_class_test,
              std::uint64_t seed, const CommonOpts& common) {
    fxc::PipelineConfig cfg = common.resolve();
    fxc::DatasetManifest manifest = fxc::load_manifest(manifest_path);
    auto [train_m, test_m] = resolve_split(manifest, seed, per_class_test);

    fxc::BuiltFeatures features =
        fxc::build_features(train_m, test_m, cfg.layout, cfg.pre);

    fxc::TrainConfig tc;
    tc.learning_rate = rate;
    tc.max_epochs = max_epochs;
    tc.target_error = target_error;
    tc.seed = seed;
    fxc::MlpModel net =
        fxc::init_weights({fxc::kFeatureDim, hidden, fxc::kLabelCount}, seed);
    fxc::TrainResult trained =
        fxc::train(std::move(net), fxc::to_train_samples(features.train), tc);

    fxc::ExpressionModel model;
    model.preprocess = cfg.pre;
    model.layout = cfg.layout;
    model.pca = std::move(features.pca);
    model.normalizer = std::move(features.normalizer);
    model.mlp = std::move(trained.model);
    model.training = {rate, hidden, trained.epochs_run, trained.final_mse, seed};

    OutputSet outputs;
    fxc::save_model(model, outputs.stage(model_path));
    if (!history_path.empty())
        write_text_file(outputs.stage(history_path),
                        fxc::history_to_csv(trained.mse_history));
    if (!train_out.empty()) fxc::save_manifest(train_m, outputs.stage(train_out));
    if (!test_out.empty()) fxc::save_manifest(test_m, outputs.stage(test_out));
    outputs.commit();

    std::printf("trained %d-%d-%d: final MSE %.10g after %ld epochs -> %s\n",
                fxc::kFeatureDim, hidden, fxc::kLabelCount, trained.final_mse,
                trained.epochs_run, model_path.c_str());
    return 0;
}

int run_grid(const std::string& manifest_path, const std::string& out_path,
             std::vector<int> hidden, std::vector<double> rates,
             double target_error, long max_epochs, int per_class_test,
             std::uint64_t seed, int jobs, const CommonOpts& common) {
    fxc::PipelineConfig cfg = common.resolve();
    fxc::DatasetManifest manifest = fxc::load_manifest(manifest_path);
    auto [train_m, test_m] = resolve_split(manifest, seed, per_class_test);
    fxc::BuiltFeatures features =
        fxc::build_features(train_m, test_m, cfg.layout, cfg.pre);

    fxc::GridResult grid = fxc::grid_search(features, hidden, rates, max_epochs,
                                            target_error, seed, jobs);

    OutputSet outputs;
    write_text_file(outputs.stage(out_path), fxc::grid_to_csv(grid));
    outputs.commit();

    const fxc::GridCell& best = grid.cells[grid.best_index];
    std::printf("best cell: hidden=%d rate=%g accuracy=%.2f%% (%zu cells) -> %s\n",
                best.hidden, best.rate, best.accuracy, grid.cells.size(),
                out_path.c_str());
    return 0;
}

int run_classify(const std::string& model_path, const std::string& image_path) {
    fxc::ExpressionModel model = fxc::load_model(model_path);
    fxc::GrayImage img = fxc::load_pgm_file(image_path);
    fxc::Classification c = fxc::classify_image(model, img);
    std::cout << fxc::label_name(c.label) << "\n";
    for (int i = 0; i < fxc::kLabelCount; ++i)
        std::printf("Y%d %-10s %.6f\n", i + 1,
                    fxc::label_name(static_cast<fxc::ExpressionLabel>(i)),
                    c.outputs[i]);
    return 0;
}

int run_eval(const std::string& model_path, const std::string& manifest_path,
             const std::string& out_path) {
    fxc::ExpressionModel model = fxc::load_model(model_path);
    fxc::DatasetManifest manifest = fxc::load_manifest(manifest_path);
    if (manifest.has_tags()) manifest = fxc::split_by_tags(manifest).second;
    if (manifest.records.empty())
        throw std::runtime_error("evaluation manifest has no test records");
    fxc::EvalReport report = fxc::evaluate_manifest(model, manifest);

    if (!out_path.empty()) {
        OutputSet outputs;
        write_text_file(outputs.stage(out_path), fxc::eval_to_csv(report));
        outputs.commit();
    }
    std::cout << fxc::eval_to_text(report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"facial expression classification toolkit"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default(true);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic face corpus");
    std::string synth_dir;
    int per_class = 20;
    std::uint64_t synth_seed = kDefaultSeed;
    synth->add_option("--out", synth_dir, "output directory")->required();
    synth->add_option("--per-class", per_class, "images per class (>= 2)")
        ->check(CLI::Range(2, 1000000));
    synth->add_option("--seed", synth_seed, "corpus seed");

    // prep
    auto* prep = app.add_subcommand("prep", "crop+equalize an image, or scan a JAFFE directory into a manifest");
    std::string prep_image, prep_scan, prep_out, prep_patches;
    CommonOpts prep_common;
    prep->add_option("--image", prep_image, "input PGM to preprocess");
    prep->add_option("--scan", prep_scan, "directory of JAFFE-coded .pgm files");
    prep->add_option("--out", prep_out, "output PGM or manifest CSV")->required();
    prep->add_option("--patches-dir", prep_patches,
                     "also write the five located region patches as PGMs");
    add_common(prep, prep_common);

    // edges
    auto* edges = app.add_subcommand("edges", "write the detected edge map as a PGM");
    std::string edges_image, edges_out;
    CommonOpts edges_common;
    edges->add_option("--image", edges_image, "input PGM")->required();
    edges->add_option("--out", edges_out, "output edge-map PGM")->required();
    add_common(edges, edges_common);

    // train
    auto* train = app.add_subcommand("train", "train an expression model from a manifest");
    std::string train_manifest, train_model, train_history, train_train_out,
        train_test_out;
    int train_hidden = 10;
    double train_rate = 0.3;
    double train_target = 1e-7;
    long train_epochs = 200000;
    int train_pct = 10;
    std::uint64_t train_seed = kDefaultSeed;
    CommonOpts train_common;
    train->add_option("--manifest", train_manifest, "dataset manifest CSV")->required();
    train->add_option("--out", train_model, "output model JSON")->required();
    train->add_option("--history", train_history, "epoch-history CSV output");
    train->add_option("--train-manifest-out", train_train_out,
                      "write the resolved training split");
    train->add_option("--test-manifest-out", train_test_out,
                      "write the resolved test split");
    train->add_option("--hidden", train_hidden, "hidden nodes")
        ->check(CLI::PositiveNumber);
    train->add_option("--rate", train_rate, "learning rate")
        ->check(CLI::PositiveNumber);
    train->add_option("--target-error", train_target, "epoch MSE stop threshold")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--max-epochs", train_epochs, "epoch cap")
        ->check(CLI::PositiveNumber);
    train->add_option("--per-class-test", train_pct,
                      "held-out images per class when the manifest has no split tags")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--seed", train_seed, "seed for split/init/shuffle");
    add_common(train, train_common);

    // grid
    auto* grid = app.add_subcommand("grid", "hidden-count x learning-rate grid search");
    std::string grid_manifest, grid_out;
    std::vector<int> grid_hidden{5, 10, 15, 20, 25};
    std::vector<double> grid_rates{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    double grid_target = 1e-7;
    long grid_epochs = 200000;
    int grid_pct = 10;
    int grid_jobs = 1;
    std::uint64_t grid_seed = kDefaultSeed;
    CommonOpts grid_common;
    grid->add_option("--manifest", grid_manifest, "dataset manifest CSV")->required();
    grid->add_option("--out", grid_out, "output grid CSV")->required();
    grid->add_option("--hidden", grid_hidden, "hidden-node counts")
        ->delimiter(',')
        ->expected(1, 1000);
    grid->add_option("--rates", grid_rates, "learning rates")
        ->delimiter(',')
        ->expected(1, 1000);
    grid->add_option("--target-error", grid_target, "epoch MSE stop threshold")
        ->check(CLI::NonNegativeNumber);
    grid->add_option("--max-epochs", grid_epochs, "epoch cap per cell")
        ->check(CLI::PositiveNumber);
    grid->add_option("--per-class-test", grid_pct,
                     "held-out images per class when the manifest has no split tags")
        ->check(CLI::PositiveNumber);
    grid->add_option("--seed", grid_seed, "base seed; cells derive their own");
    grid->add_option("--jobs", grid_jobs, "parallel cells (results unchanged)")
        ->check(CLI::PositiveNumber);
    add_common(grid, grid_common);

    // classify
    auto* classify = app.add_subcommand("classify", "classify one image");
    std::string classify_model, classify_image;
    classify->add_option("--model", classify_model, "model JSON")->required();
    classify->add_option("--image", classify_image, "input PGM")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a model on a manifest");
    std::string eval_model, eval_manifest, eval_out;
    eval->add_option("--model", eval_model, "model JSON")->required();
    eval->add_option("--manifest", eval_manifest,
                     "test manifest (rows tagged `test` win when tags are present)")
        ->required();
    eval->add_option("--out", eval_out, "machine-readable report CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) return run_synth(synth_dir, per_class, synth_seed);
        if (prep->parsed()) {
            if ((prep_image.empty()) == (prep_scan.empty()))
                throw CLI::ValidationError("prep", "pass exactly one of --image or --scan");
            check_thresholds(prep_common);
            return run_prep(prep_image, prep_scan, prep_out, prep_patches,
                            prep_common);
        }
        if (edges->parsed()) {
            check_thresholds(edges_common);
            return run_edges(edges_image, edges_out, edges_common);
        }
        if (train->parsed()) {
            check_thresholds(train_common);
            return run_train(train_manifest, train_model, train_history,
                             train_train_out, train_test_out, train_hidden,
                             train_rate, train_target, train_epochs, train_pct,
                             train_seed, train_common);
        }
        if (grid->parsed()) {
            check_thresholds(grid_common);
            return run_grid(grid_manifest, grid_out, grid_hidden, grid_rates,
                            grid_target, grid_epochs, grid_pct, grid_seed,
                            grid_jobs, grid_common);
        }
        if (classify->parsed()) return run_classify(classify_model, classify_image);
        if (eval->parsed()) return run_eval(eval_model, eval_manifest, eval_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
