// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#include "fxc/regions.hpp"

#include <cmath>
#include <stdexcept>

namespace fxc {

const char* region_name(RegionId id) {
    switch (id) {
        case RegionId::LeftEyebrow: return "left_eyebrow";
        case RegionId::RightEyebrow: return "right_eyebrow";
        case RegionId::LeftEye: return "left_eye";
        case RegionId::RightEye: return "right_eye";
        case RegionId::Mouth: return "mouth";
    }
    return "?";
}

void RegionLayout::validate() const {
    for (const RegionSpec& r : regions) {
        if (r.patch_w < 1 || r.patch_h < 1)
            throw std::invalid_argument("region \"" + r.name +
                                        "\" has a degenerate patch size");
        if (!rect_inside(r.window, face_width, face_height))
            throw std::invalid_argument("region \"" + r.name +
                                        "\" window leaves the " +
                                        std::to_string(face_width) + "x" +
                                        std::to_string(face_height) + " face");
    }
}

RegionLayout default_layout() {
    RegionLayout l;
    l.regions = {{
        {"left_eyebrow", {6, 12, 37, 23}, 24, 12},
        {"right_eyebrow", {43, 12, 37, 23}, 24, 12},
        {"left_eye", {6, 28, 37, 25}, 24, 12},
        {"right_eye", {43, 28, 37, 25}, 24, 12},
        {"mouth", {20, 54, 46, 29}, 32, 16},
    }};
    return l;
}

bool RegionSet::operator==(const RegionSet& o) const {
    for (int i = 0; i < kRegionCount; ++i) {
        if (rects[i] != o.rects[i] || patches[i].width != o.patches[i].width ||
            patches[i].height != o.patches[i].height ||
            patches[i].values != o.patches[i].values)
            return false;
    }
    return true;
}

std::array<Rect, kRegionCount> locate_regions(const EdgeMap& edges,
                                              const RegionLayout& layout) {
    layout.validate();
    for (const RegionSpec& r : layout.regions)
        if (!rect_inside(r.window, edges.width, edges.height))
            throw std::invalid_argument("region \"" + r.name +
                                        "\" window leaves the edge map");

    std::array<Rect, kRegionCount> out;
    for (int i = 0; i < kRegionCount; ++i) {
        const RegionSpec& r = layout.regions[i];
        long count = 0;
        double sx = 0.0, sy = 0.0;
        for (int y = r.window.y; y < r.window.y + r.window.h; ++y) {
            for (int x = r.window.x; x < r.window.x + r.window.w; ++x) {
                if (edges.at(x, y)) {
                    ++count;
                    sx += x;
                    sy += y;
                }
            }
        }
        double cx, cy;
        if (count > 0) {
            cx = sx / count;
            cy = sy / count;
        } else {
            // deterministic fallback: center of the window's pixel range
            cx = r.window.x + (r.window.w - 1) / 2.0;
            cy = r.window.y + (r.window.h - 1) / 2.0;
        }
        Rect rect;
        rect.w = r.patch_w;
        rect.h = r.patch_h;
        rect.x = static_cast<int>(std::lround(cx)) - r.patch_w / 2;
        rect.y = static_cast<int>(std::lround(cy)) - r.patch_h / 2;
        rect.x = std::max(0, std::min(rect.x, edges.width - rect.w));
        rect.y = std::max(0, std::min(rect.y, edges.height - rect.h));
        out[i] = rect;
    }
    return out;
}

RegionPatch extract_patch(const GrayImage& img, const Rect& rect, int target_w,
                          int target_h, const std::string& name) {
    if (target_w < 1 || target_h < 1)
        throw std::invalid_argument("extract_patch target size must be positive");
    if (!rect_inside(rect, img.width, img.height))
        throw std::invalid_argument("extract_patch rect out of image bounds");

    RegionPatch patch;
    patch.name = name;
    patch.width = target_w;
    patch.height = target_h;
    patch.values.resize(static_cast<std::size_t>(target_w) * target_h);

    auto src_coord = [](int t, int target, int source) -> double {
        if (target == 1) return (source - 1) / 2.0;
        return static_cast<double>(t) * (source - 1) / (target - 1);
    };

    for (int ty = 0; ty < target_h; ++ty) {
        double sy = src_coord(ty, target_h, rect.h);
        int y0 = static_cast<int>(sy);
        int y1 = std::min(y0 + 1, rect.h - 1);
        double fy = sy - y0;
        for (int tx = 0; tx < target_w; ++tx) {
            double sx = src_coord(tx, target_w, rect.w);
            int x0 = static_cast<int>(sx);
            int x1 = std::min(x0 + 1, rect.w - 1);
            double fx = sx - x0;
            double v00 = img.at(rect.x + x0, rect.y + y0);
            double v10 = img.at(rect.x + x1, rect.y + y0);
            double v01 = img.at(rect.x + x0, rect.y + y1);
            double v11 = img.at(rect.x + x1, rect.y + y1);
            double top = v00 + (v10 - v00) * fx;
            double bot = v01 + (v11 - v01) * fx;
            patch.values[static_cast<std::size_t>(ty) * target_w + tx] =
                top + (bot - top) * fy;
        }
    }
    return patch;
}

RegionSet extract_all(const GrayImage& img, const EdgeMap& edges,
                      const RegionLayout& layout) {
    if (img.width != edges.width || img.height != edges.height)
        throw std::invalid_argument("extract_all: image and edge map dimensions differ");
    RegionSet set;
    set.rects = locate_regions(edges, layout);
    for (int i = 0; i < kRegionCount; ++i) {
        const RegionSpec& r = layout.regions[i];
        set.patches[i] =
            extract_patch(img, set.rects[i], r.patch_w, r.patch_h, r.name);
    }
    return set;
}

GrayImage patch_to_image(const RegionPatch& patch) {
    GrayImage out(patch.width, patch.height);
    for (std::size_t i = 0; i < patch.values.size(); ++i) {
        double v = std::lround(patch.values[i]);
        out.pixels[i] = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
    }
    return out;
}

} // namespace fxc
