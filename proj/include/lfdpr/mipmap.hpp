// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <lfdpr/error.hpp>
#include <lfdpr/image.hpp>
#include <lfdpr/math.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <vector>

namespace lfdpr {

using Texel = std::array<float, 4>;

/// Box-filtered mip chain. Level 0 is the source image; each level halves both
/// dimensions (floor, min 1) until 1x1.
class MipPyramid {
public:
    MipPyramid() = default;

    explicit MipPyramid(ImageF base) {
        if (base.empty()) throw Error(ErrorKind::MalformedInput, "cannot build a mip pyramid from an empty image");
        if (base.channels > 4) throw Error(ErrorKind::Unsupported, "textures support at most 4 channels");
        const int count = 1 + std::bit_width(static_cast<unsigned>(std::max(base.width, base.height))) - 1;
        levels_.reserve(count);
        levels_.push_back(std::move(base));
        while (static_cast<int>(levels_.size()) < count) levels_.push_back(downsample(levels_.back()));
    }

    int level_count() const { return static_cast<int>(levels_.size()); }
    int width() const { return levels_.front().width; }
    int height() const { return levels_.front().height; }
    int channels() const { return levels_.front().channels; }
    const ImageF& level(int l) const { return levels_[l]; }

    /// Bilinear fetch at one level with repeat addressing.
    Texel sample_bilinear(int l, Vec2 uv) const {
        const ImageF& img = levels_[l];
        const double x = uv.x * img.width - 0.5;
        const double y = uv.y * img.height - 0.5;
        const double fx0 = std::floor(x);
        const double fy0 = std::floor(y);
        const float tx = static_cast<float>(x - fx0);
        const float ty = static_cast<float>(y - fy0);
        const int x0 = wrap(static_cast<long long>(fx0), img.width);
        const int y0 = wrap(static_cast<long long>(fy0), img.height);
        const int x1 = x0 + 1 == img.width ? 0 : x0 + 1;
        const int y1 = y0 + 1 == img.height ? 0 : y0 + 1;
        const float* r0 = &img.data[static_cast<std::size_t>(y0) * img.width * img.channels];
        const float* r1 = &img.data[static_cast<std::size_t>(y1) * img.width * img.channels];
        Texel out{0, 0, 0, 0};
        const int c = img.channels;
        for (int k = 0; k < c; ++k) {
            const float a = r0[x0 * c + k] + (r0[x1 * c + k] - r0[x0 * c + k]) * tx;
            const float b = r1[x0 * c + k] + (r1[x1 * c + k] - r1[x0 * c + k]) * tx;
            out[k] = a + (b - a) * ty;
        }
        return out;
    }

    /// Trilinear fetch: bilinear in the two bracketing levels, linear across them.
    Texel sample_trilinear(Vec2 uv, double lod) const {
        const double max_lod = level_count() - 1;
        lod = std::clamp(std::isfinite(lod) ? lod : 0.0, 0.0, max_lod);
        const int l0 = static_cast<int>(std::floor(lod));
        const float t = static_cast<float>(lod - l0);
        Texel a = sample_bilinear(l0, uv);
        if (t == 0.0f || l0 + 1 >= level_count()) return a;
        const Texel b = sample_bilinear(l0 + 1, uv);
        for (int k = 0; k < 4; ++k) a[k] += (b[k] - a[k]) * t;
        return a;
    }

    /// Level of detail for a footprint given as texture-space derivatives (uv units per pixel).
    double isotropic_lod(Vec2 duv_dx, Vec2 duv_dy) const {
        const double w = width(), h = height();
        const double lx = std::hypot(duv_dx.x * w, duv_dx.y * h);
        const double ly = std::hypot(duv_dy.x * w, duv_dy.y * h);
        const double rho = std::max(lx, ly);
        return rho > 0 ? std::log2(rho) : 0.0;
    }

    /// Anisotropic approximation: `probes` trilinear fetches spread along the major axis of the
    /// pixel footprint, each at the LOD of the footprint's minor extent (major/probes floor).
    Texel sample_anisotropic(Vec2 uv, Vec2 duv_dx, Vec2 duv_dy, int probes) const {
        const double w = width(), h = height();
        const double lx = std::hypot(duv_dx.x * w, duv_dx.y * h);
        const double ly = std::hypot(duv_dy.x * w, duv_dy.y * h);
        const Vec2 major = lx >= ly ? duv_dx : duv_dy;
        const double lmajor = std::max(lx, ly);
        const double lminor = std::min(lx, ly);
        probes = std::max(1, probes);
        const double footprint = std::max(lminor, lmajor / probes);
        const double lod = footprint > 0 ? std::log2(footprint) : 0.0;
        Texel acc{0, 0, 0, 0};
        for (int i = 0; i < probes; ++i) {
            const double o = (i + 0.5) / probes - 0.5;
            const Texel t = sample_trilinear(uv + major * o, lod);
            for (int k = 0; k < 4; ++k) acc[k] += t[k];
        }
        for (int k = 0; k < 4; ++k) acc[k] /= static_cast<float>(probes);
        return acc;
    }

private:
    static int wrap(long long i, int n) {
        long long r = i % n;
        return static_cast<int>(r < 0 ? r + n : r);
    }

    // Each child averages its parents; with an odd parent dimension the trailing parent row/column
    // is folded into the last child so no source texel is dropped.
    static ImageF downsample(const ImageF& src) {
        const int w = std::max(1, src.width / 2);
        const int h = std::max(1, src.height / 2);
        ImageF dst(w, h, src.channels);
        for (int y = 0; y < h; ++y) {
            const int sy0 = std::min(2 * y, src.height - 1);
            const int sy1 = (y == h - 1) ? src.height - 1 : 2 * y + 1;
            for (int x = 0; x < w; ++x) {
                const int sx0 = std::min(2 * x, src.width - 1);
                const int sx1 = (x == w - 1) ? src.width - 1 : 2 * x + 1;
                for (int c = 0; c < src.channels; ++c) {
                    double sum = 0;
                    int n = 0;
                    for (int sy = sy0; sy <= sy1; ++sy)
                        for (int sx = sx0; sx <= sx1; ++sx) {
                            sum += src.at(sx, sy, c);
                            ++n;
                        }
                    dst.at(x, y, c) = static_cast<float>(sum / n);
                }
            }
        }
        return dst;
    }

    std::vector<ImageF> levels_;
};

inline MipPyramid build_pyramid(ImageF texture) { return MipPyramid(std::move(texture)); }

}  // namespace lfdpr
