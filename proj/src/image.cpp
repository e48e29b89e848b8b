// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#include "fxc/image.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fxc {

bool rect_inside(const Rect& r, int width, int height) {
    return r.w >= 1 && r.h >= 1 && r.x >= 0 && r.y >= 0 &&
           r.x + r.w <= width && r.y + r.h <= height;
}

namespace {

// PGM header scanner: whitespace-separated decimal tokens, '#' starts a
// comment running to end of line.
struct TokenReader {
    const std::vector<std::uint8_t>& data;
    std::size_t pos = 0;

    bool is_space(std::uint8_t c) const {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
               c == '\v';
    }

    void skip_space_and_comments() {
        while (pos < data.size()) {
            if (is_space(data[pos])) {
                ++pos;
            } else if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    long next_number(const char* what) {
        skip_space_and_comments();
        if (pos >= data.size() || data[pos] < '0' || data[pos] > '9')
            throw std::runtime_error(std::string("malformed PGM header: expected ") +
                                     what);
        long value = 0;
        while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9') {
            value = value * 10 + (data[pos] - '0');
            if (value > 1000000000L)
                throw std::runtime_error(std::string("malformed PGM header: ") +
                                         what + " out of range");
            ++pos;
        }
        return value;
    }
};

} // namespace

GrayImage load_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        std::string magic;
        if (bytes.size() >= 2) magic.assign(bytes.begin(), bytes.begin() + 2);
        throw std::runtime_error("unsupported PGM magic \"" + magic +
                                 "\" (only binary P5 is accepted)");
    }
    TokenReader rd{bytes, 2};
    long w = rd.next_number("width");
    long h = rd.next_number("height");
    long maxval = rd.next_number("maxval");
    if (w < 1 || h < 1)
        throw std::runtime_error("malformed PGM header: non-positive dimensions");
    if (maxval > 255)
        throw std::runtime_error("PGM maxval " + std::to_string(maxval) +
                                 " not supported (must be <= 255)");
    if (maxval < 1)
        throw std::runtime_error("malformed PGM header: maxval must be >= 1");
    // Exactly one whitespace byte separates the header from the raster.
    if (rd.pos >= bytes.size() || !rd.is_space(bytes[rd.pos]))
        throw std::runtime_error("malformed PGM header: missing raster separator");
    ++rd.pos;

    std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() - rd.pos < count)
        throw std::runtime_error("truncated PGM data: expected " +
                                 std::to_string(count) + " pixel bytes, got " +
                                 std::to_string(bytes.size() - rd.pos));

    GrayImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.assign(bytes.begin() + rd.pos, bytes.begin() + rd.pos + count);
    return img;
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
    char header[64];
    int n = std::snprintf(header, sizeof header, "P5\n%d %d\n255\n", img.width,
                          img.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

GrayImage load_pgm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open image file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return load_pgm(bytes);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_pgm_file(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write image file: " + path);
    auto bytes = save_pgm(img);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("short write on image file: " + path);
}

GrayImage crop(const GrayImage& img, const Rect& rect) {
    if (!rect_inside(rect, img.width, img.height))
        throw std::invalid_argument(
            "crop rect (" + std::to_string(rect.x) + "," + std::to_string(rect.y) +
            "," + std::to_string(rect.w) + "x" + std::to_string(rect.h) +
            ") out of bounds for " + std::to_string(img.width) + "x" +
            std::to_string(img.height) + " image");
    GrayImage out(rect.w, rect.h);
    for (int y = 0; y < rect.h; ++y)
        for (int x = 0; x < rect.w; ++x)
            out.at(x, y) = img.at(rect.x + x, rect.y + y);
    return out;
}

GrayImage histogram_equalize(const GrayImage& img) {
    std::array<std::int64_t, 256> cum{};
    for (std::uint8_t v : img.pixels) ++cum[v];
    for (int v = 1; v < 256; ++v) cum[v] += cum[v - 1];

    const std::int64_t n = static_cast<std::int64_t>(img.pixels.size());
    std::int64_t cmin = 0;
    for (int v = 0; v < 256; ++v) {
        if (cum[v] > 0) {
            cmin = cum[v];
            break;
        }
    }
    if (cmin == n) return img; // constant image

    // (cdf - cdf_min) / (1 - cdf_min) * 255 == 255 * (cum - cmin) / (n - cmin);
    // rounded half up as (510*d + e) / (2*e).
    std::array<std::uint8_t, 256> map{};
    const std::int64_t e = n - cmin;
    for (int v = 0; v < 256; ++v) {
        std::int64_t d = cum[v] - cmin;
        if (d < 0) d = 0;
        map[v] = static_cast<std::uint8_t>((510 * d + e) / (2 * e));
    }

    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = map[img.pixels[i]];
    return out;
}

} // namespace fxc
