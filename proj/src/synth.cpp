// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "fxc/pipeline.hpp"
#include "fxc/rng.hpp"

namespace fxc {

namespace {

constexpr int kFace = 85;

void stamp(GrayImage& img, double cx, double cy, double radius, int value) {
    int x0 = static_cast<int>(std::floor(cx - radius));
    int x1 = static_cast<int>(std::ceil(cx + radius));
    int y0 = static_cast<int>(std::floor(cy - radius));
    int y1 = static_cast<int>(std::ceil(cy + radius));
    for (int y = y0; y <= y1; ++y) {
        if (y < 0 || y >= img.height) continue;
        for (int x = x0; x <= x1; ++x) {
            if (x < 0 || x >= img.width) continue;
            double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= radius * radius)
                img.at(x, y) = static_cast<std::uint8_t>(value);
        }
    }
}

void fill_ellipse(GrayImage& img, double cx, double cy, double rx, double ry,
                  int value) {
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double nx = (x - cx) / rx, ny = (y - cy) / ry;
            if (nx * nx + ny * ny <= 1.0)
                img.at(x, y) = static_cast<std::uint8_t>(value);
        }
}

void ellipse_ring(GrayImage& img, double cx, double cy, double rx, double ry,
                  double band, int value) {
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double nx = (x - cx) / rx, ny = (y - cy) / ry;
            double r = std::sqrt(nx * nx + ny * ny);
            if (std::fabs(r - 1.0) <= band)
                img.at(x, y) = static_cast<std::uint8_t>(value);
        }
}

int clamp255(int v) { return v < 0 ? 0 : (v > 255 ? 255 : v); }

// Class-conditional geometry. Every class gets a distinct combination of
// eyebrow slope, eye shape, and mouth curvature/width/height, with steps
// large enough to dominate the per-image jitter.
struct ClassShape {
    double brow_slope;
    double brow_height;
    double eye_rx;
    double eye_ry;
    double mouth_drop; // vertical endpoint offset of the parabola, px
    double mouth_halfwidth;
    double mouth_height;
};

ClassShape shape_for(int cls) {
    ClassShape s;
    s.brow_slope = (cls - 3) * 0.28;
    s.brow_height = 19.0 + ((cls * 2) % 5);
    s.eye_rx = 6.0 + ((cls * 2) % 5);
    s.eye_ry = 2.0 + 0.65 * ((cls * 3) % 7);
    s.mouth_drop = (cls - 3) * 2.2;
    s.mouth_halfwidth = 9.0 + (cls % 3) * 3.0; // whole mouth fits the 32px patch
    s.mouth_height = 63.0 + ((cls * 4) % 7);
    return s;
}

// Smoothly shaded base: a vertical background ramp and a radially shaded
// face ellipse keep the intensity histogram spread out, so histogram
// equalization downstream stays gentle instead of blowing up pixel noise.
GrayImage shaded_base() {
    GrayImage img(kFace, kFace);
    for (int y = 0; y < kFace; ++y)
        for (int x = 0; x < kFace; ++x) {
            double nx = (x - 42.0) / 38.0, ny = (y - 44.0) / 41.0;
            double r2 = nx * nx + ny * ny;
            int v;
            if (r2 <= 1.0)
                v = 195 - static_cast<int>(35.0 * r2);
            else
                v = 215 + static_cast<int>(30.0 * y / kFace);
            img.at(x, y) = static_cast<std::uint8_t>(clamp255(v));
        }
    return img;
}

GrayImage render_face(int cls, Rng& rng) {
    GrayImage img = shaded_base();
    ellipse_ring(img, 42, 44, 38, 41, 0.035, 90);

    ClassShape s = shape_for(cls);
    auto jitter = [&]() { return static_cast<double>(rng.next_below(3)) - 1.0; };
    double jx = jitter(), jy = jitter();
    int ink = clamp255(62 + static_cast<int>(rng.next_below(17)) - 8);

    // eyebrows: mirrored slanted strokes
    for (int side = 0; side < 2; ++side) {
        double cx = (side == 0 ? 24.0 : 61.0) + jx;
        double cy = s.brow_height + jy;
        double slope = side == 0 ? s.brow_slope : -s.brow_slope;
        for (double t = -10.0; t <= 10.0; t += 0.5)
            stamp(img, cx + t, cy + slope * t, 2.0, ink);
    }

    // eyes: filled ellipses, size and openness vary by class
    for (int side = 0; side < 2; ++side) {
        double cx = (side == 0 ? 24.0 : 61.0) + jx;
        fill_ellipse(img, cx, 40.0 + jy, s.eye_rx, s.eye_ry, clamp255(ink - 5));
    }

    // mouth: parabolic stroke with class-specific width, height and bend
    {
        double cx = 42.0 + jx;
        double cy = s.mouth_height + jy;
        for (double dx = -s.mouth_halfwidth; dx <= s.mouth_halfwidth; dx += 0.5) {
            double rel = dx / s.mouth_halfwidth;
            stamp(img, cx + dx, cy + s.mouth_drop * rel * rel, 2.2,
                  clamp255(ink - 8));
        }
    }

    // pixel noise
    for (auto& p : img.pixels) {
        int v = p + static_cast<int>(rng.next_below(13)) - 6;
        p = static_cast<std::uint8_t>(clamp255(v));
    }
    return img;
}

} // namespace

std::vector<SynthImage> synth_images(std::uint64_t seed, int per_class) {
    if (per_class < 2)
        throw std::invalid_argument("synth: per-class count must be >= 2");
    std::vector<SynthImage> out;
    out.reserve(static_cast<std::size_t>(per_class) * kLabelCount);
    for (int cls = 0; cls < kLabelCount; ++cls) {
        std::string label = label_name(static_cast<ExpressionLabel>(cls));
        for (char& c : label) c = static_cast<char>(std::tolower(c));
        for (int i = 0; i < per_class; ++i) {
            std::uint64_t image_index =
                static_cast<std::uint64_t>(cls) * per_class + i;
            Rng rng(derive_seed(seed, image_index));
            char name[64];
            std::snprintf(name, sizeof name, "%s_%03d.pgm", label.c_str(), i);
            out.push_back(SynthImage{name,
                                     static_cast<ExpressionLabel>(cls),
                                     render_face(cls, rng)});
        }
    }
    return out;
}

DatasetManifest synth_dataset(std::uint64_t seed, int per_class,
                              const std::string& out_dir) {
    std::vector<SynthImage> images = synth_images(seed, per_class);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + out_dir +
                                 ": " + ec.message());

    std::vector<std::string> written;
    DatasetManifest manifest;
    try {
        for (const SynthImage& si : images) {
            std::string path = (std::filesystem::path(out_dir) / si.name).string();
            save_pgm_file(si.image, path);
            written.push_back(path);
            manifest.records.push_back(ManifestRecord{path, si.label, SplitTag::None});
        }
        std::string manifest_path =
            (std::filesystem::path(out_dir) / "manifest.csv").string();
        DatasetManifest relative;
        for (const SynthImage& si : images)
            relative.records.push_back(
                ManifestRecord{si.name, si.label, SplitTag::None});
        save_manifest(relative, manifest_path);
        written.push_back(manifest_path);
    } catch (...) {
        for (const std::string& path : written)
            std::filesystem::remove(path, ec);
        throw;
    }
    return manifest;
}

} // namespace fxc
