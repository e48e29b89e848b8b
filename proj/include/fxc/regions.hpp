// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#ifndef FXC_REGIONS_HPP
#define FXC_REGIONS_HPP

#include <array>
#include <string>
#include <vector>

#include "fxc/canny.hpp"
#include "fxc/image.hpp"

namespace fxc {

/// Fixed region order; feature concatenation downstream depends on it.
enum class RegionId : int {
    LeftEyebrow = 0,
    RightEyebrow = 1,
    LeftEye = 2,
    RightEye = 3,
    Mouth = 4,
};
inline constexpr int kRegionCount = 5;

const char* region_name(RegionId id);

/// One region's search window plus its patch size.
struct RegionSpec {
    std::string name;
    Rect window;    // in face-crop coordinates
    int patch_w = 0;
    int patch_h = 0;
};

/**
 * @brief Five search windows + patch sizes, in face-crop coordinates.
 *
 * Patch sizes are fixed at 24x12 for eyebrows and eyes and 32x16 for the
 * mouth, so the flattened lengths are 288, 288, 288, 288 and 512
 * (1664 total before PCA).
 */
struct RegionLayout {
    std::array<RegionSpec, kRegionCount> regions;

    int face_width = 85;
    int face_height = 85;

    /// Throws std::invalid_argument when a window leaves the face raster
    /// or a patch size is degenerate.
    void validate() const;
};

/// Layout for the default 85x85 face crop: anatomical thirds of a centered
/// frontal face. Fully overridable via the pipeline config file.
RegionLayout default_layout();

/// Flattened row-major grayscale patch, values in [0, 255].
struct RegionPatch {
    std::string name;
    int width = 0;
    int height = 0;
    std::vector<double> values;
};

struct RegionSet {
    std::array<Rect, kRegionCount> rects;
    std::array<RegionPatch, kRegionCount> patches;

    bool operator==(const RegionSet&) const;
};

/**
 * @brief Locate the five regions on an edge map.
 *
 * Each located Rect has its region's exact patch size and is centered on
 * the centroid of the edge pixels inside the search window (window center
 * when the window holds no edge pixels), then clamped to the image.
 */
std::array<Rect, kRegionCount> locate_regions(const EdgeMap& edges,
                                              const RegionLayout& layout);

/// Bilinear resample of the rect sub-image to target_w x target_h,
/// flattened row-major. Endpoints map to endpoints (single-row/column
/// targets sample the source midpoint).
RegionPatch extract_patch(const GrayImage& img, const Rect& rect, int target_w,
                          int target_h, const std::string& name = "");

/// locate_regions + extract_patch for all five regions in fixed order.
RegionSet extract_all(const GrayImage& img, const EdgeMap& edges,
                      const RegionLayout& layout);

/// Patch rendered back to a raster for debugging (values rounded).
GrayImage patch_to_image(const RegionPatch& patch);

} // namespace fxc

#endif
