// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Elemental image array construction: interleave rendered views under the slanted lens,
// with optional jittered Gaussian reconstruction in space and angle.
//
// A panel subpixel at (x_sub, y) samples the view raster at the same normalized position:
// ((x_sub + 0.5) / (3 W_p), (y + 0.5) / H_p). Its colour channel is x_sub mod 3.

#pragma once

#include <lfdpr/error.hpp>
#include <lfdpr/image.hpp>
#include <lfdpr/lfd_model.hpp>
#include <lfdpr/parallel.hpp>
#include <lfdpr/rng.hpp>

#include <atomic>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace lfdpr {

enum class ReconMode { None, Spatial, View, ViewSpatial };

inline const char* to_string(ReconMode m) {
    switch (m) {
        case ReconMode::None: return "none";
        case ReconMode::Spatial: return "spatial";
        case ReconMode::View: return "view";
        case ReconMode::ViewSpatial: return "view-spatial";
    }
    return "?";
}

inline ReconMode parse_recon_mode(const std::string& s) {
    if (s == "none") return ReconMode::None;
    if (s == "spatial") return ReconMode::Spatial;
    if (s == "view") return ReconMode::View;
    if (s == "view-spatial" || s == "view_spatial") return ReconMode::ViewSpatial;
    throw Error(ErrorKind::InvalidConfig, "unknown reconstruction mode '" + s + "'");
}

struct ReconstructionConfig {
    ReconMode mode = ReconMode::None;
    double spatial_diameter = 2.25;  // view pixels
    double angular_support = 2.0;    // view intervals, total
    int samples = 8;
    std::uint64_t seed = 0;

    bool spatial() const { return mode == ReconMode::Spatial || mode == ReconMode::ViewSpatial; }
    bool angular() const { return mode == ReconMode::View || mode == ReconMode::ViewSpatial; }
    // Gaussian widths: sigma = diameter / 4 in space, half a view interval in angle.
    double spatial_sigma() const { return spatial_diameter / 4.0; }
    double angular_sigma() const { return 0.5; }
};

/// Per-subpixel filter weight bookkeeping, filled when requested.
struct WeightAudit {
    double max_deviation = 0.0;  // max |sum(w) - 1|
    std::uint64_t subpixels = 0;
};

namespace detail {

inline void check_views(std::span<const Image8> views) {
    if (views.empty()) throw Error(ErrorKind::InvalidConfig, "interleave: no views");
    for (const auto& v : views) {
        if (v.channels != 3) throw Error(ErrorKind::InvalidConfig, "interleave: views must be RGB");
        if (v.width != views[0].width || v.height != views[0].height)
            throw Error(ErrorKind::DimensionMismatch, "interleave: all views must share one resolution");
    }
}

// Gaussian offset truncated to `radius` (in sigma units) by redrawing with fresh counters;
// falls back to radial clamping after a fixed number of tries.
inline void truncated_normal2(const CounterRng& rng, std::uint64_t base, double radius, double& a, double& b) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        rng.normal2(base + attempt, a, b);
        if (a * a + b * b <= radius * radius) return;
    }
    const double r = std::sqrt(a * a + b * b);
    a *= radius / r;
    b *= radius / r;
}

inline double truncated_normal1(const CounterRng& rng, std::uint64_t base, double radius) {
    double a = 0, b = 0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        rng.normal2(base + attempt, a, b);
        if (std::abs(a) <= radius) return a;
        if (std::abs(b) <= radius) return b;
    }
    return std::clamp(a, -radius, radius);
}

}  // namespace detail

/// Builds the panel-resolution EIA from `views` (count V or any count the caller chooses;
/// it must equal config.view_count or twice it).
inline Image8 interleave(std::span<const Image8> views, const LfdConfig& config, const ReconstructionConfig& recon,
                         int workers = 1, WeightAudit* audit = nullptr) {
    detail::check_views(views);
    const int view_count = static_cast<int>(views.size());
    if (view_count != config.view_count && view_count != 2 * config.view_count)
        throw Error(ErrorKind::InvalidConfig, "interleave: got " + std::to_string(view_count) +
                                                  " views for a display configured with " +
                                                  std::to_string(config.view_count));
    if (recon.mode != ReconMode::None && recon.samples < 1)
        throw Error(ErrorKind::InvalidConfig, "interleave: reconstruction needs at least one sample");

    const LensMapping lens(config);
    const int W = config.panel_width, H = config.panel_height;
    const int XV = views[0].width, YV = views[0].height;
    const int sub_w = 3 * W;
    Image8 eia(W, H, 3);

    std::vector<double> row_deviation(audit ? H : 0, 0.0);

    const double spatial_sigma = recon.spatial_sigma();
    const double spatial_radius = 0.5 * recon.spatial_diameter / spatial_sigma;  // sigma units
    const double angular_radius = 0.5 * recon.angular_support / recon.angular_sigma();
    const double inv_samples = recon.mode == ReconMode::None ? 1.0 : 1.0 / recon.samples;
    const CounterRng rng(recon.seed, 0);

    parallel_for(static_cast<std::size_t>(H), workers, [&](std::size_t row) {
        const int y = static_cast<int>(row);
        const double ny = (y + 0.5) / H;
        const int py_nearest = std::min(YV - 1, static_cast<int>(ny * YV));
        double worst = 0.0;
        for (int xs = 0; xs < sub_w; ++xs) {
            const double u = lens.phase(xs, y);
            const int channel = xs % 3;
            const double nx = (xs + 0.5) / sub_w;
            std::uint8_t* out = &eia.data[static_cast<std::size_t>(y) * sub_w + xs];
            if (recon.mode == ReconMode::None) {
                const int v = std::clamp(static_cast<int>(std::floor(u * view_count)), 0, view_count - 1);
                const int px = std::min(XV - 1, static_cast<int>(nx * XV));
                *out = views[v].at(px, py_nearest, channel);
                if (audit) worst = std::max(worst, 0.0);
                continue;
            }
            const std::uint64_t sub_index = static_cast<std::uint64_t>(y) * sub_w + xs;
            const CounterRng sub_rng(recon.seed, sub_index);
            double acc = 0.0, wsum = 0.0;
            for (int s = 0; s < recon.samples; ++s) {
                // Spatial position in view-pixel units (pixel centers at i + 0.5).
                double sx = nx * XV, sy = ny * YV;
                int tap_count_x = 1, tap_count_y = 1;
                int x0 = std::min(XV - 1, static_cast<int>(sx)), y0 = py_nearest;
                double tx = 0, ty = 0;
                if (recon.spatial()) {
                    double gx = 0, gy = 0;
                    detail::truncated_normal2(sub_rng, 16ull * s, spatial_radius, gx, gy);
                    sx += gx * spatial_sigma - 0.5;
                    sy += gy * spatial_sigma - 0.5;
                    const double fx = std::floor(sx), fy = std::floor(sy);
                    tx = sx - fx;
                    ty = sy - fy;
                    x0 = static_cast<int>(fx);
                    y0 = static_cast<int>(fy);
                    tap_count_x = tap_count_y = 2;
                }
                // Angular position: continuous view coordinate with view v centered at v.
                int va = std::clamp(static_cast<int>(std::floor(u * view_count)), 0, view_count - 1);
                int vb = va;
                double wa = 1.0, wb = 0.0;
                if (recon.angular()) {
                    const double du = detail::truncated_normal1(sub_rng, 16ull * s + 8, angular_radius) *
                                      recon.angular_sigma();  // view intervals
                    const double centre = u * view_count - 0.5;
                    const double f = centre + du;
                    const double ff = std::floor(f);
                    va = static_cast<int>(ff);
                    vb = va + 1;
                    wb = f - ff;
                    wa = 1.0 - wb;
                    // Locality: views more than one interval from the subpixel's own phase get no weight.
                    if (std::abs(va - centre) > 1.0) wa = 0.0;
                    if (std::abs(vb - centre) > 1.0) wb = 0.0;
                    const double norm = wa + wb;
                    wa /= norm;
                    wb /= norm;
                    va = std::clamp(va, 0, view_count - 1);
                    vb = std::clamp(vb, 0, view_count - 1);
                }
                double sample = 0.0, sample_w = 0.0;
                for (int k = 0; k < 2; ++k) {
                    const int v = k == 0 ? va : vb;
                    const double wv = k == 0 ? wa : wb;
                    if (wv == 0.0) continue;
                    const Image8& img = views[v];
                    for (int j = 0; j < tap_count_y; ++j) {
                        const int yy = std::clamp(y0 + j, 0, YV - 1);
                        const double wy = tap_count_y == 1 ? 1.0 : (j == 0 ? 1.0 - ty : ty);
                        for (int i = 0; i < tap_count_x; ++i) {
                            const int xx = std::clamp(x0 + i, 0, XV - 1);
                            const double wx = tap_count_x == 1 ? 1.0 : (i == 0 ? 1.0 - tx : tx);
                            const double w = wv * wx * wy;
                            sample += w * img.at(xx, yy, channel);
                            sample_w += w;
                        }
                    }
                }
                acc += sample * inv_samples;
                wsum += sample_w * inv_samples;
            }
            *out = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
            if (audit) worst = std::max(worst, std::abs(wsum - 1.0));
        }
        if (audit) row_deviation[row] = worst;
    });

    if (audit) {
        audit->subpixels = static_cast<std::uint64_t>(sub_w) * H;
        audit->max_deviation = 0.0;
        for (double d : row_deviation) audit->max_deviation = std::max(audit->max_deviation, d);
    }
    return eia;
}

struct SparseView {
    Image8 image;                      // RGB, zero where unassigned
    std::vector<std::uint8_t> mask;    // per (pixel, channel): 1 when some subpixel mapped there
};

/// Inverse routing of a mode-none EIA: every subpixel is written back to its (view, pixel,
/// channel). Reconstruction modes blend views and cannot be inverted.
inline std::vector<SparseView> deinterleave(const Image8& eia, const LfdConfig& config, int view_count, int view_width,
                                            int view_height, ReconMode mode = ReconMode::None) {
    if (mode != ReconMode::None)
        throw Error(ErrorKind::Unsupported, "deinterleave: only mode-none EIAs are invertible");
    if (eia.width != config.panel_width || eia.height != config.panel_height || eia.channels != 3)
        throw Error(ErrorKind::DimensionMismatch, "deinterleave: EIA does not match the panel");
    if (view_count < 1) throw Error(ErrorKind::InvalidConfig, "deinterleave: view count must be positive");
    const LensMapping lens(config);
    std::vector<SparseView> out(view_count);
    for (auto& sv : out) {
        sv.image = Image8(view_width, view_height, 3);
        sv.mask.assign(static_cast<std::size_t>(view_width) * view_height * 3, 0);
    }
    const int W = config.panel_width, H = config.panel_height;
    const int sub_w = 3 * W;
    for (int y = 0; y < H; ++y) {
        const int py = std::min(view_height - 1, static_cast<int>((y + 0.5) / H * view_height));
        for (int xs = 0; xs < sub_w; ++xs) {
            const double u = lens.phase(xs, y);
            const int v = std::clamp(static_cast<int>(std::floor(u * view_count)), 0, view_count - 1);
            const int px = std::min(view_width - 1, static_cast<int>((xs + 0.5) / sub_w * view_width));
            const int c = xs % 3;
            out[v].image.at(px, py, c) = eia.data[static_cast<std::size_t>(y) * sub_w + xs];
            out[v].mask[out[v].image.index(px, py, c)] = 1;
        }
    }
    return out;
}

/// 2x2 unweighted box reduction of a spatially supersampled image.
template <typename T>
ImageT<T> downsample_supersampled(const ImageT<T>& src) {
    if (src.width % 2 != 0 || src.height % 2 != 0)
        throw Error(ErrorKind::DimensionMismatch, "supersampled image must have even dimensions");
    ImageT<T> out(src.width / 2, src.height / 2, src.channels);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            for (int c = 0; c < src.channels; ++c) {
                const double sum = static_cast<double>(src.at(2 * x, 2 * y, c)) + src.at(2 * x + 1, 2 * y, c) +
                                   src.at(2 * x, 2 * y + 1, c) + src.at(2 * x + 1, 2 * y + 1, c);
                if constexpr (std::is_integral_v<T>) out.at(x, y, c) = static_cast<T>(std::lround(sum / 4.0));
                else out.at(x, y, c) = static_cast<T>(sum / 4.0);
            }
    return out;
}

}  // namespace lfdpr
