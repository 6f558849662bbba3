// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <lfdpr/error.hpp>

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace lfdpr {

/// Interleaved-channel raster. Row 0 is the top row.
template <typename T>
struct ImageT {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<T> data;

    ImageT() = default;
    ImageT(int w, int h, int c, T fill = T{})
        : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

    bool empty() const { return data.empty(); }
    std::size_t index(int x, int y, int c = 0) const {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }
    T& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
    const T& at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }
    bool same_shape(const ImageT& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

using Image8 = ImageT<std::uint8_t>;
using ImageF = ImageT<float>;

inline ImageF to_float(const Image8& img) {
    ImageF out(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i] / 255.0f;
    return out;
}

inline Image8 to_8bit(const ImageF& img) {
    Image8 out(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const float v = std::clamp(img.data[i], 0.0f, 1.0f);
        out.data[i] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
    }
    return out;
}

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace detail

/// Reads 8- or 16-bit PNGs (gray, gray+alpha, RGB, RGBA); 16-bit samples are reduced to 8 bits.
inline Image8 read_png(const std::filesystem::path& path) {
    detail::FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw Error(ErrorKind::FileNotFound, "cannot open PNG: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorKind::Io, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorKind::MalformedInput, "malformed PNG: " + path.string());
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (depth == 16) png_set_strip_16(png);
    png_read_update_info(png, info);

    Image8 img(static_cast<int>(png_get_image_width(png, info)),
               static_cast<int>(png_get_image_height(png, info)),
               static_cast<int>(png_get_channels(png, info)));
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) rows[y] = &img.data[img.index(0, y)];
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

namespace detail {

inline void write_png_rows(const std::filesystem::path& path, int width, int height, int color_type,
                           int bit_depth, const std::vector<png_bytep>& rows) {
    detail::FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw Error(ErrorKind::Io, "cannot write PNG: " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::Io, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::Io, "PNG write failed: " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    // Fixed zlib settings keep output byte-identical across runs.
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace detail

inline void write_png(const std::filesystem::path& path, const Image8& img) {
    int color = 0;
    switch (img.channels) {
        case 1: color = PNG_COLOR_TYPE_GRAY; break;
        case 2: color = PNG_COLOR_TYPE_GRAY_ALPHA; break;
        case 3: color = PNG_COLOR_TYPE_RGB; break;
        case 4: color = PNG_COLOR_TYPE_RGBA; break;
        default: throw Error(ErrorKind::Unsupported, "unsupported channel count for PNG");
    }
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) rows[y] = const_cast<png_bytep>(&img.data[img.index(0, y)]);
    detail::write_png_rows(path, img.width, img.height, color, 8, rows);
}

/// 16-bit grayscale PNG (big-endian samples as PNG requires).
inline void write_png16(const std::filesystem::path& path, int width, int height,
                        const std::vector<std::uint16_t>& gray) {
    if (gray.size() != static_cast<std::size_t>(width) * height)
        throw Error(ErrorKind::DimensionMismatch, "16-bit PNG size mismatch");
    std::vector<std::uint8_t> bytes(gray.size() * 2);
    for (std::size_t i = 0; i < gray.size(); ++i) {
        bytes[2 * i] = static_cast<std::uint8_t>(gray[i] >> 8);
        bytes[2 * i + 1] = static_cast<std::uint8_t>(gray[i] & 0xFF);
    }
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) rows[y] = &bytes[static_cast<std::size_t>(y) * width * 2];
    detail::write_png_rows(path, width, height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

}  // namespace lfdpr
