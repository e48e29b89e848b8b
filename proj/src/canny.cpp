// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#include "fxc/canny.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fxc {

namespace {

inline int clampi(int v, int lo, int hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

} // namespace

GrayImage gaussian_smooth(const GrayImage& img) {
    if (img.width < 5 || img.height < 5)
        throw std::invalid_argument("gaussian_smooth needs an image of at least 5x5, got " +
                                    std::to_string(img.width) + "x" +
                                    std::to_string(img.height));
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            int sum = 0;
            for (int ky = -2; ky <= 2; ++ky) {
                int sy = clampi(y + ky, 0, img.height - 1);
                for (int kx = -2; kx <= 2; ++kx) {
                    int sx = clampi(x + kx, 0, img.width - 1);
                    sum += kGaussianKernel[ky + 2][kx + 2] * img.at(sx, sy);
                }
            }
            // divisor 159 is odd, so (sum + 79) / 159 rounds to nearest exactly
            int v = (sum + kGaussianDivisor / 2) / kGaussianDivisor;
            out.at(x, y) = static_cast<std::uint8_t>(clampi(v, 0, 255));
        }
    }
    return out;
}

double edge_magnitude(double gx, double gy) { return std::hypot(gx, gy); }

GradientField sobel_gradients(const GrayImage& img) {
    if (img.width < 3 || img.height < 3)
        throw std::invalid_argument("sobel_gradients needs an image of at least 3x3, got " +
                                    std::to_string(img.width) + "x" +
                                    std::to_string(img.height));
    GradientField f;
    f.width = img.width;
    f.height = img.height;
    std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    f.gx.resize(n);
    f.gy.resize(n);
    f.magnitude.resize(n);
    f.direction.resize(n);

    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            int sx = 0, sy = 0;
            for (int ky = -1; ky <= 1; ++ky) {
                int py = clampi(y + ky, 0, img.height - 1);
                for (int kx = -1; kx <= 1; ++kx) {
                    int px = clampi(x + kx, 0, img.width - 1);
                    int v = img.at(px, py);
                    sx += kSobelX[ky + 1][kx + 1] * v;
                    sy += kSobelY[ky + 1][kx + 1] * v;
                }
            }
            std::size_t i = f.index(x, y);
            f.gx[i] = sx;
            f.gy[i] = sy;
            f.magnitude[i] = edge_magnitude(sx, sy);
            double theta = 0.0;
            if (sx != 0 || sy != 0) {
                theta = std::atan2(static_cast<double>(sy), static_cast<double>(sx)) *
                        180.0 / M_PI;
                if (theta < 0.0) theta += 180.0;
                if (theta >= 180.0) theta -= 180.0;
            }
            f.direction[i] = theta;
        }
    }
    return f;
}

int quantize_direction(double degrees) {
    if (degrees < 22.5 || degrees >= 157.5) return 0;
    if (degrees < 67.5) return 45;
    if (degrees < 112.5) return 90;
    return 135;
}

GradientField non_max_suppress(const GradientField& field) {
    GradientField out = field;
    auto mag = [&](int x, int y) -> double {
        if (x < 0 || y < 0 || x >= field.width || y >= field.height) return 0.0;
        return field.magnitude[field.index(x, y)];
    };
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            std::size_t i = field.index(x, y);
            double m = field.magnitude[i];
            if (m == 0.0) continue;
            double a, b;
            switch (quantize_direction(field.direction[i])) {
                case 0:  // gradient along x: compare left/right
                    a = mag(x - 1, y);
                    b = mag(x + 1, y);
                    break;
                case 45: // gradient toward upper-right (gy counts up)
                    a = mag(x + 1, y - 1);
                    b = mag(x - 1, y + 1);
                    break;
                case 90:
                    a = mag(x, y - 1);
                    b = mag(x, y + 1);
                    break;
                default: // 135: gradient toward upper-left
                    a = mag(x - 1, y - 1);
                    b = mag(x + 1, y + 1);
                    break;
            }
            if (!(m >= a && m >= b)) out.magnitude[i] = 0.0;
        }
    }
    return out;
}

Thresholds resolve_thresholds(const GradientField& field, const CannyConfig& cfg) {
    Thresholds t;
    if (cfg.high) {
        t.high = *cfg.high;
    } else {
        double maxmag = 0.0;
        for (double m : field.magnitude) maxmag = std::max(maxmag, m);
        t.high = 0.2 * maxmag;
    }
    t.low = cfg.low ? *cfg.low : 0.5 * t.high;
    return t;
}

EdgeMap hysteresis(const GradientField& field, const CannyConfig& cfg) {
    Thresholds t = resolve_thresholds(field, cfg);
    // A fully relative config on a flat field resolves to 0/0: no edges.
    // Explicit values must satisfy 0 < low < high.
    if ((cfg.low || cfg.high) && !(t.low > 0.0 && t.low < t.high))
        throw std::invalid_argument("hysteresis thresholds must satisfy 0 < low < high (got low=" +
                                    std::to_string(t.low) + ", high=" +
                                    std::to_string(t.high) + ")");

    EdgeMap out;
    out.width = field.width;
    out.height = field.height;
    out.edges.assign(static_cast<std::size_t>(field.width) * field.height, 0);
    if (t.high <= 0.0) return out; // flat field, no edges

    // 0 = below low, 1 = weak, 2 = strong
    std::vector<std::uint8_t> klass(out.edges.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < klass.size(); ++i) {
        double m = field.magnitude[i];
        if (m >= t.high) {
            klass[i] = 2;
            out.edges[i] = 1;
            stack.push_back(i);
        } else if (m >= t.low) {
            klass[i] = 1;
        }
    }

    // flood from strong pixels over the weak set, 8-connected
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        int x = static_cast<int>(i % field.width);
        int y = static_cast<int>(i / field.width);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= field.width || ny >= field.height)
                    continue;
                std::size_t j = field.index(nx, ny);
                if (klass[j] == 1 && !out.edges[j]) {
                    out.edges[j] = 1;
                    stack.push_back(j);
                }
            }
        }
    }
    return out;
}

EdgeMap canny(const GrayImage& img, const CannyConfig& cfg) {
    return hysteresis(non_max_suppress(sobel_gradients(gaussian_smooth(img))), cfg);
}

GrayImage edges_to_image(const EdgeMap& edges) {
    GrayImage out(edges.width, edges.height);
    for (std::size_t i = 0; i < edges.edges.size(); ++i)
        out.pixels[i] = edges.edges[i] ? 255 : 0;
    return out;
}

} // namespace fxc
