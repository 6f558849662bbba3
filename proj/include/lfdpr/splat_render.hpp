// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Multiview splatting: each point becomes a world-space rectangle in its triangle's sampling
// frame, projected per view, clipped to the owning triangle with the rasterizer's edge
// functions, shaded once per view and resolved through packed depth/payload words.

#pragma once

#include <lfdpr/lfd_model.hpp>
#include <lfdpr/parallel.hpp>
#include <lfdpr/pointgen.hpp>
#include <lfdpr/raster.hpp>
#include <lfdpr/shading.hpp>

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace lfdpr {

struct ProjectedSplat {
    std::array<Vec2, 4> quad{};  // pixels, corner order (-,-) (+,-) (+,+) (-,+) in the sampling frame
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // quad bounds
    double depth = 0;            // view-space depth of the point
    bool empty = true;

    double signed_area() const {
        double a = 0;
        for (int k = 0; k < 4; ++k) a += cross(quad[k], quad[(k + 1) % 4]);
        return 0.5 * a;
    }
    /// Quad area in normalized device coordinates.
    double ndc_area(int view_width, int view_height) const {
        return std::abs(signed_area()) * 4.0 / (static_cast<double>(view_width) * view_height);
    }
};

/// Projects splats of one triangle into one view. Screen x = X / D and y = Y / D with X, Y, D
/// affine in the world point, so each corner combines the center's values with per-axis
/// increments that only depend on the extents.
class SplatProjector {
public:
    SplatProjector(const FrameTriangle& t, const ViewCamera& view) : t_(&t), view_(&view) {}

    ProjectedSplat project(const SplatPoint& p) {
        if (p.extents[0] != ex_ || p.extents[1] != ey_) set_extents(p.extents[0], p.extents[1]);
        const ViewCamera& v = *view_;
        ProjectedSplat s;
        const Vec3 c = p.world();
        s.depth = v.view_depth(c);
        const double cx = v.ox * s.depth + (c.x - v.eye.x) * v.sx;
        const double cy = v.oy * s.depth - (c.y - v.eye.y) * v.sy;
        constexpr std::array<std::array<double, 2>, 4> kSigns{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        for (int k = 0; k < 4; ++k) {
            const double i = kSigns[k][0], j = kSigns[k][1];
            const double d = s.depth + i * ax_[2] + j * ay_[2];
            if (!(d > v.near)) return s;
            const double inv = 1.0 / d;
            const double x = (cx + i * ax_[0] + j * ay_[0]) * inv, y = (cy + i * ax_[1] + j * ay_[1]) * inv;
            s.quad[k] = {x, y};
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
        if (x1 < 0 || y1 < 0 || x0 > v.width || y0 > v.height) return s;
        s.x0 = x0;
        s.x1 = x1;
        s.y0 = y0;
        s.y1 = y1;
        s.empty = false;
        return s;
    }

    /// Conservative pre-check from the center alone: false only when the projected quad cannot
    /// contain a pixel center in columns [x_lo, x_hi] and rows [y_lo, y_hi].
    bool may_cover(const SplatPoint& p, int x_lo, int x_hi, int y_lo, int y_hi) {
        if (p.extents[0] != ex_ || p.extents[1] != ey_) set_extents(p.extents[0], p.extents[1]);
        const ViewCamera& v = *view_;
        const Vec3 c = p.world();
        const double d = v.view_depth(c);
        const double dmin = d - reach_[2];
        if (!(dmin > v.near)) return true;
        const double inv = 1.0 / d, inv_min = 1.0 / dmin;
        // Corner offset from the center: (dX - x * dD) / (d + dD) per axis.
        const double x = (v.ox * d + (c.x - v.eye.x) * v.sx) * inv;
        const double y = (v.oy * d - (c.y - v.eye.y) * v.sy) * inv;
        const double rx = (reach_[0] + std::abs(x) * reach_[2]) * inv_min + 1e-6;
        const double ry = (reach_[1] + std::abs(y) * reach_[2]) * inv_min + 1e-6;
        constexpr double kSlack = 1e-3;
        return std::max(x_lo, static_cast<int>(std::ceil(x - rx - 0.5 - kSlack))) <=
                   std::min(x_hi, static_cast<int>(std::floor(x + rx - 0.5 + kSlack))) &&
               std::max(y_lo, static_cast<int>(std::ceil(y - ry - 0.5 - kSlack))) <=
                   std::min(y_hi, static_cast<int>(std::floor(y + ry - 0.5 + kSlack)));
    }

private:
    void set_extents(float ex, float ey) {
        ex_ = ex;
        ey_ = ey;
        const ViewCamera& v = *view_;
        const Vec3 a = t_->axis_x * static_cast<double>(ex), b = t_->axis_y * static_cast<double>(ey);
        ax_ = {a.x * v.sx - v.ox * a.z, -a.y * v.sy - v.oy * a.z, -a.z};
        ay_ = {b.x * v.sx - v.ox * b.z, -b.y * v.sy - v.oy * b.z, -b.z};
        for (int k = 0; k < 3; ++k) reach_[k] = std::abs(ax_[k]) + std::abs(ay_[k]);
    }

    const FrameTriangle* t_;
    const ViewCamera* view_;
    float ex_ = -1, ey_ = -1;
    std::array<double, 3> ax_{}, ay_{};  // increments of X, Y, D per unit step along each axis
    std::array<double, 3> reach_{};      // largest |increment| of X, Y, D over the four corners
};

/// Projects the point's world rectangle (extents along the triangle's sampling axes).
inline ProjectedSplat project_splat(const SplatPoint& p, const FrameTriangle& t, const ViewCamera& view) {
    return SplatProjector(t, view).project(p);
}

/// Writes every pixel whose center lies inside the quad and, when `clip` is given, inside the
/// owning triangle's projection. Every write carries the point's depth key. `payload()` is
/// evaluated at most once, and only when some pixel can still win. Returns the number of
/// attempted writes.
template <typename PayloadFn>
std::size_t fill_splat(const ProjectedSplat& s, const TriangleSetup* clip, const ViewCamera& view, ViewBuffer& buf,
                       PayloadFn&& payload) {
    if (s.empty || (clip && !clip->visible())) return 0;
    constexpr double kSlack = 1e-3;  // pixels; keeps abutting splats from leaving cracks
    const int bx0 = clip ? clip->min_x() : 0, bx1 = clip ? clip->max_x() : buf.width() - 1;
    const int by0 = clip ? clip->min_y() : 0, by1 = clip ? clip->max_y() : buf.height() - 1;
    const int px0 = std::max(bx0, static_cast<int>(std::ceil(s.x0 - 0.5 - kSlack)));
    const int px1 = std::min(bx1, static_cast<int>(std::floor(s.x1 - 0.5 + kSlack)));
    const int py0 = std::max(by0, static_cast<int>(std::ceil(s.y0 - 0.5 - kSlack)));
    const int py1 = std::min(by1, static_cast<int>(std::floor(s.y1 - 0.5 + kSlack)));
    if (px0 > px1 || py0 > py1) return 0;

    const double sign = s.signed_area() >= 0 ? 1.0 : -1.0;
    std::array<Vec2, 4> edge{};
    std::array<double, 4> slack2{};  // squared slack distance times squared edge length
    for (int k = 0; k < 4; ++k) {
        edge[k] = s.quad[(k + 1) % 4] - s.quad[k];
        slack2[k] = kSlack * kSlack * dot(edge[k], edge[k]);
    }
    const std::uint32_t key = depth_key(s.depth, view.near, view.far);

    std::optional<std::uint32_t> cached;
    std::size_t writes = 0;
    for (int py = py0; py <= py1; ++py) {
        for (int px = px0; px <= px1; ++px) {
            const Vec2 c{px + 0.5, py + 0.5};
            bool inside = true;
            for (int k = 0; k < 4 && inside; ++k) {
                const double e = sign * cross(edge[k], c - s.quad[k]);
                inside = e >= 0 || e * e <= slack2[k];
            }
            if (!inside) continue;
            if (clip && clip->covering_fan(px, py) < 0) continue;
            const std::size_t i = static_cast<std::size_t>(py) * buf.width() + px;
            if (buf.depth_key_at(i) < key) continue;
            if (!cached) cached = payload();
            buf.write_min(i, pack_word(key, *cached));
            ++writes;
        }
    }
    return writes;
}

inline std::size_t fill_splat(const ProjectedSplat& s, const TriangleSetup* clip, const ViewCamera& view,
                              ViewBuffer& buf, std::uint32_t payload) {
    return fill_splat(s, clip, view, buf, [payload] { return payload; });
}

/// Per-view texture values: the splat's texture-space area is scaled up by the fraction of
/// a pixel it covers, clamped into the band, and used to blend the prefetched end values.
inline SurfaceChannels interpolate_tv(const SplatPoint& p, double texture_ratio, double ndc_area, int view_width,
                                      int view_height) {
    SurfaceChannels out{};
    const double lo = p.vpuv_min, hi = p.vpuv_max;
    double t = 0.0;
    if (hi > lo) {
        const double size_uv = 4.0 * p.extents[0] * p.extents[1] * texture_ratio;
        const double coverage = std::min(1.0, ndc_area * 0.25 * view_width * view_height);
        const double vse = coverage > 0 ? size_uv / coverage : hi;
        const double vs = std::clamp(vse, lo, hi);
        t = (vs - lo) / (hi - lo);
    }
    for (int k = 0; k < kSurfaceChannels; ++k) {
        const float a = static_cast<float>(from_unorm16(p.tv_min[k]));
        const float b = static_cast<float>(from_unorm16(p.tv_max[k]));
        out[k] = t == 0.0 ? a : a + (b - a) * static_cast<float>(t);
    }
    return out;
}

struct SplatStats {
    std::uint64_t splat_views = 0;   // (point, view) pairs examined
    std::uint64_t shaded = 0;
    std::uint64_t writes = 0;
    double seconds = 0;
};

struct SplatOptions {
    int workers = 1;
    std::size_t chunk_points = 4096;
};

/// Splats all points into all views. Points are grouped by triangle (order-independent), and
/// work is distributed as (chunk of triangle groups, view) items, chunk-major.
inline std::vector<ViewBuffer> render_views(const PointCloud& cloud, std::span<const ViewCamera> views,
                                            const ShadingContext& shading, const SplatOptions& options = {},
                                            SplatStats* stats = nullptr) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<ViewBuffer> buffers;
    buffers.reserve(views.size());
    for (const auto& v : views) buffers.emplace_back(v.width, v.height);

    // Counting sort by triangle id.
    const std::size_t tri_count = cloud.triangles.size();
    std::vector<std::uint32_t> offsets(tri_count + 1, 0);
    for (const auto& p : cloud.points) {
        if (p.triangle_id() >= tri_count) throw Error(ErrorKind::IndexOutOfRange, "point references a missing triangle");
        ++offsets[p.triangle_id() + 1];
    }
    for (std::size_t t = 0; t < tri_count; ++t) offsets[t + 1] += offsets[t];
    std::vector<std::uint32_t> order(cloud.points.size());
    {
        std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
        for (std::size_t i = 0; i < cloud.points.size(); ++i)
            order[cursor[cloud.points[i].triangle_id()]++] = static_cast<std::uint32_t>(i);
    }
    // Chunks of whole triangle groups.
    std::vector<std::uint32_t> chunk_start{0};
    for (std::size_t t = 0, acc = 0; t < tri_count; ++t) {
        acc += offsets[t + 1] - offsets[t];
        if (acc >= options.chunk_points) {
            chunk_start.push_back(static_cast<std::uint32_t>(t + 1));
            acc = 0;
        }
    }
    if (chunk_start.back() != tri_count) chunk_start.push_back(static_cast<std::uint32_t>(tri_count));
    const std::size_t chunks = chunk_start.size() - 1;

    std::atomic<std::uint64_t> splat_views{0}, shaded{0}, writes{0};
    parallel_for(views.size() * chunks, options.workers, [&](std::size_t item) {
        const std::size_t c = item / views.size(), v = item % views.size();
        const ViewCamera& view = views[v];
        ViewBuffer& buf = buffers[v];
        std::uint64_t local_views = 0, local_shaded = 0, local_writes = 0;
        for (std::uint32_t t = chunk_start[c]; t < chunk_start[c + 1]; ++t) {
            if (offsets[t] == offsets[t + 1]) continue;
            const FrameTriangle& tri = cloud.triangles[t];
            if (!front_facing(tri, view.eye)) continue;
            std::optional<TriangleSetup> setup;  // built on the first splat that needs clipping
            const double ratio = tri.texture_ratio();
            const Vec3f tangent = Vec3f(tri.tangent);
            SplatProjector projector(tri, view);
            for (std::uint32_t k = offsets[t]; k < offsets[t + 1]; ++k) {
                const SplatPoint& p = cloud.points[order[k]];
                ++local_views;
                const TriangleSetup* clip = nullptr;
                if (!p.interior()) {
                    if (!setup) setup.emplace(view, tri.p[0], tri.p[1], tri.p[2]);
                    if (!setup->visible()) continue;
                    clip = &*setup;
                }
                if (clip ? !projector.may_cover(p, clip->min_x(), clip->max_x(), clip->min_y(), clip->max_y())
                         : !projector.may_cover(p, 0, view.width - 1, 0, view.height - 1))
                    continue;
                const ProjectedSplat s = projector.project(p);
                if (s.empty) continue;
                local_writes += fill_splat(s, clip, view, buf, [&] {
                    ++local_shaded;
                    const double area = s.ndc_area(view.width, view.height);
                    const SurfaceValues sv = unflatten(interpolate_tv(p, ratio, area, view.width, view.height));
                    const Vec3f n = Vec3f(decode_octahedral(p.normal));
                    const Vec3f to_eye = Vec3f(view.eye - p.world());
                    return pack_rgba(shade(sv, n, tangent, to_eye, shading));
                });
            }
        }
        splat_views += local_views;
        shaded += local_shaded;
        writes += local_writes;
    });

    if (stats) {
        stats->splat_views = splat_views;
        stats->shaded = shaded;
        stats->writes = writes;
        stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return buffers;
}

}  // namespace lfdpr
