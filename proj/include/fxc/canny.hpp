// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#ifndef FXC_CANNY_HPP
#define FXC_CANNY_HPP

#include <array>
#include <optional>
#include <vector>

#include "fxc/image.hpp"

namespace fxc {

/// 5x5 integer Gaussian (sigma 1.4), applied with divisor 159.
inline constexpr std::array<std::array<int, 5>, 5> kGaussianKernel{{
    {2, 4, 5, 4, 2},
    {4, 9, 12, 9, 4},
    {5, 12, 15, 12, 5},
    {4, 9, 12, 9, 4},
    {2, 4, 5, 4, 2},
}};
inline constexpr int kGaussianDivisor = 159;

inline constexpr std::array<std::array<int, 3>, 3> kSobelX{{
    {-1, 0, 1},
    {-2, 0, 2},
    {-1, 0, 1},
}};
inline constexpr std::array<std::array<int, 3>, 3> kSobelY{{
    {1, 2, 1},
    {0, 0, 0},
    {-1, -2, -1},
}};

/**
 * @brief Per-pixel gradient planes.
 *
 * gx, gy are signed Sobel responses; magnitude is the Euclidean norm;
 * direction is atan2(gy, gx) in degrees normalized to [0, 180). gy is
 * positive when intensity increases toward smaller row indices.
 */
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> gx, gy, magnitude, direction;

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width + x;
    }
};

/// Binary edge raster; edges[i] is 0 or 1.
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> edges;

    bool at(int x, int y) const {
        return edges[static_cast<std::size_t>(y) * width + x] != 0;
    }

    bool operator==(const EdgeMap& other) const = default;
};

/**
 * @brief Hysteresis thresholds.
 *
 * Unset values fall back to relative defaults resolved against the
 * non-max-suppressed field: high = 0.2 * max magnitude, low = 0.5 * high.
 * When both are set they are absolute magnitudes and must satisfy
 * 0 < low < high.
 */
struct CannyConfig {
    std::optional<double> low;
    std::optional<double> high;
};

/// Resolved (low, high) pair for a given suppressed field.
struct Thresholds {
    double low = 0;
    double high = 0;
};
Thresholds resolve_thresholds(const GradientField& field, const CannyConfig& cfg);

/// 5x5 Gaussian smoothing with replicated borders; needs at least 5x5 input.
GrayImage gaussian_smooth(const GrayImage& img);

/// Sobel gradients with replicated borders; needs at least 3x3 input.
GradientField sobel_gradients(const GrayImage& img);

/// Euclidean edge strength for one pixel's gradient pair.
double edge_magnitude(double gx, double gy);

/// Direction bin for non-maximum suppression: 0, 45, 90 or 135 degrees.
int quantize_direction(double degrees);

/**
 * @brief Non-maximum suppression.
 *
 * Keeps a magnitude only when it is >= both neighbors along the quantized
 * gradient direction (out-of-image neighbors count as 0); suppressed
 * pixels get magnitude 0. gx, gy and direction are copied untouched.
 */
GradientField non_max_suppress(const GradientField& field);

/**
 * @brief Double-threshold edge tracking.
 *
 * magnitude >= high is strong, low <= magnitude < high is weak; final
 * edges are the strong pixels plus every weak pixel 8-connected,
 * transitively, to a strong one.
 */
EdgeMap hysteresis(const GradientField& field, const CannyConfig& cfg);

/// Full detector: smooth -> gradients -> suppression -> hysteresis.
EdgeMap canny(const GrayImage& img, const CannyConfig& cfg = {});

/// Edge map as a PGM-ready raster (edge = 255, non-edge = 0).
GrayImage edges_to_image(const EdgeMap& edges);

} // namespace fxc

#endif
