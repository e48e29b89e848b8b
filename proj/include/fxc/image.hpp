// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#ifndef FXC_IMAGE_HPP
#define FXC_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fxc {

/**
 * @brief 8-bit single-channel raster, row-major.
 *
 * Coordinates are (x, y) = (column, row); pixel (x, y) lives at
 * pixels[y * width + x]. All pipeline stages carry images in this form.
 */
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }

    bool operator==(const GrayImage& other) const = default;
};

/// Axis-aligned pixel rectangle: x, y is the top-left corner.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const Rect& other) const = default;
};

/// True when r (with w, h >= 1) lies fully inside a width x height raster.
bool rect_inside(const Rect& r, int width, int height);

/**
 * @brief Decode a binary PGM (magic "P5", maxval <= 255).
 *
 * Header tokens may be separated by any whitespace and '#' comments.
 * Pixel values are taken verbatim; no rescaling happens even when
 * maxval < 255. Throws std::runtime_error with a distinct message for an
 * unsupported magic, a malformed header, maxval > 255, or truncated data.
 */
GrayImage load_pgm(const std::vector<std::uint8_t>& bytes);

/// Encode as binary PGM with the canonical header "P5\n<w> <h>\n255\n".
std::vector<std::uint8_t> save_pgm(const GrayImage& img);

GrayImage load_pgm_file(const std::string& path);
void save_pgm_file(const GrayImage& img, const std::string& path);

/// Copy of the rect sub-image. Throws std::invalid_argument when rect is
/// not fully inside img.
GrayImage crop(const GrayImage& img, const Rect& rect);

/**
 * @brief Histogram equalization.
 *
 * out(v) = round((cdf(v) - cdf_min) / (1 - cdf_min) * 255) with
 * cdf(v) = (#pixels <= v) / N and cdf_min the smallest nonzero cdf value.
 * Constant images are returned unchanged. Evaluated in exact integer
 * arithmetic (round half up), so results are platform independent.
 */
GrayImage histogram_equalize(const GrayImage& img);

} // namespace fxc

#endif
