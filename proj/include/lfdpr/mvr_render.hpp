// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Reference multiview rasterizer: one full pass over the triangles per view, perspective-
// correct attributes, per-pixel LOD from analytic uv derivatives. The gold-standard mode
// adds anisotropic probing, more views, higher resolution and Gaussian reconstruction.

#pragma once

#include <lfdpr/eia.hpp>
#include <lfdpr/lfd_model.hpp>
#include <lfdpr/parallel.hpp>
#include <lfdpr/pointgen.hpp>
#include <lfdpr/raster.hpp>
#include <lfdpr/shading.hpp>

#include <atomic>
#include <chrono>
#include <span>
#include <vector>

namespace lfdpr {

enum class RasterMode { Baseline, GoldStandard };

struct RasterConfig {
    RasterMode mode = RasterMode::Baseline;
    int anisotropic_probes = 4;  // gold standard only
    int workers = 1;
    // Gold standard view set and reconstruction.
    int gold_view_count = 96;
    int gold_width = 960;
    int gold_height = 720;
    int gold_samples = 32;
    std::uint64_t seed = 0;
};

struct RasterStats {
    std::uint64_t triangle_stage = 0;  // per-view triangle invocations, summed over views
    std::uint64_t fragments = 0;
    double seconds = 0;
};

namespace detail {

struct TextureRefs {
    std::array<const MipPyramid*, kTextureSlots> tex{};
};

}  // namespace detail

/// Rasterizes rows [row_begin, row_end) of one view into `buf`. Returns fragments written.
inline std::uint64_t rasterize_rows(std::span<const FrameTriangle> table, std::span<const Material> materials,
                                    std::span<const MipPyramid> textures, const ViewCamera& view,
                                    const ShadingContext& shading, const RasterConfig& config, ViewBuffer& buf,
                                    int row_begin, int row_end) {
    std::uint64_t fragments = 0;
    const double scale = TriangleSetup::kSubpixelScale;
    for (const FrameTriangle& tri : table) {
        if (!front_facing(tri, view.eye)) continue;
        const TriangleSetup setup(view, tri.p[0], tri.p[1], tri.p[2]);
        if (!setup.visible() || !setup.front_facing()) continue;
        const int y0 = std::max(setup.min_y(), row_begin), y1 = std::min(setup.max_y(), row_end - 1);
        if (y0 > y1) continue;
        const Material& m = materials[tri.material];
        const SurfaceValues defaults = material_defaults(m);
        detail::TextureRefs refs;
        for (int s = 0; s < kTextureSlots; ++s)
            refs.tex[s] = m.textures[s] >= 0 ? &textures[static_cast<std::size_t>(m.textures[s])] : nullptr;
        const Vec3f tangent = Vec3f(tri.tangent);

        for (int f = 0; f < setup.fan_count(); ++f) {
            const TriangleSetup::Fan& fan = setup.fan(f);
            // Fan-vertex attributes divided by depth; lambda_i weights them, lambda_i is affine.
            std::array<Vec2, 3> uvw;
            for (int i = 0; i < 3; ++i) {
                const Vec3& b = fan.bary_over_depth[i];
                uvw[i] = tri.uv[0] * b.x + tri.uv[1] * b.y + tri.uv[2] * b.z;
            }
            // d(lambda_i)/d(pixel) for the edge opposite vertex i.
            std::array<double, 3> dldx, dldy;
            for (int i = 0; i < 3; ++i) {
                const int e = (i + 1) % 3, e1 = (e + 1) % 3;
                dldx[i] = -static_cast<double>(fan.y[e1] - fan.y[e]) * scale / fan.area2;
                dldy[i] = static_cast<double>(fan.x[e1] - fan.x[e]) * scale / fan.area2;
            }
            double dDdx = 0, dDdy = 0;
            Vec2 dNdx, dNdy;
            for (int i = 0; i < 3; ++i) {
                dDdx += dldx[i] * fan.inv_depth[i];
                dDdy += dldy[i] * fan.inv_depth[i];
                dNdx += uvw[i] * dldx[i];
                dNdy += uvw[i] * dldy[i];
            }
            const double area = static_cast<double>(fan.area2);
            for (int py = y0; py <= y1; ++py) {
                const std::int64_t sy = TriangleSetup::sample_coord(py);
                for (int px = setup.min_x(); px <= setup.max_x(); ++px) {
                    const std::int64_t sx = TriangleSetup::sample_coord(px);
                    if (!fan.inside(sx, sy)) continue;
                    const double l0 = fan.edge(1, sx, sy) / area;
                    const double l1 = fan.edge(2, sx, sy) / area;
                    const double l2 = fan.edge(0, sx, sy) / area;
                    const double D = l0 * fan.inv_depth[0] + l1 * fan.inv_depth[1] + l2 * fan.inv_depth[2];
                    const std::uint32_t key = depth_key(1.0 / D, view.near, view.far);
                    const std::size_t idx = static_cast<std::size_t>(py) * buf.width() + px;
                    if (buf.depth_key_at(idx) < key) continue;
                    const Vec3 bary = (fan.bary_over_depth[0] * l0 + fan.bary_over_depth[1] * l1 +
                                       fan.bary_over_depth[2] * l2) / D;
                    const Vec2 N = uvw[0] * l0 + uvw[1] * l1 + uvw[2] * l2;
                    const Vec2 uv = N / D;
                    const double inv_d2 = 1.0 / (D * D);
                    const Vec2 duv_dx = (dNdx * D - N * dDdx) * inv_d2;
                    const Vec2 duv_dy = (dNdy * D - N * dDdy) * inv_d2;

                    SurfaceValues sv = defaults;
                    for (int s = 0; s < kTextureSlots; ++s) {
                        const MipPyramid* tex = refs.tex[s];
                        if (!tex) continue;
                        const Texel t = config.mode == RasterMode::GoldStandard
                                            ? tex->sample_anisotropic(uv, duv_dx, duv_dy, config.anisotropic_probes)
                                            : tex->sample_trilinear(uv, tex->isotropic_lod(duv_dx, duv_dy));
                        assign_slot(sv, static_cast<TextureSlot>(s), t, tex->channels());
                    }
                    Vec3 n = normalize(tri.n[0] * bary.x + tri.n[1] * bary.y + tri.n[2] * bary.z);
                    if (length(n) < 0.5) n = tri.normal;
                    const Vec3 pos = tri.p[0] * bary.x + tri.p[1] * bary.y + tri.p[2] * bary.z;
                    const Rgb8 c = shade(sv, Vec3f(n), tangent, Vec3f(view.eye - pos), shading);
                    buf.write_min(idx, pack_word(key, pack_rgba(c)));
                    ++fragments;
                }
            }
        }
    }
    return fragments;
}

inline ViewBuffer rasterize_view(std::span<const FrameTriangle> table, std::span<const Material> materials,
                                 std::span<const MipPyramid> textures, const ViewCamera& view,
                                 const ShadingContext& shading, const RasterConfig& config = {},
                                 RasterStats* stats = nullptr) {
    ViewBuffer buf(view.width, view.height);
    const int bands = std::max(1, config.workers);
    std::atomic<std::uint64_t> fragments{0};
    parallel_for(static_cast<std::size_t>(bands), config.workers, [&](std::size_t b) {
        const int r0 = static_cast<int>(static_cast<long long>(view.height) * b / bands);
        const int r1 = static_cast<int>(static_cast<long long>(view.height) * (b + 1) / bands);
        fragments += rasterize_rows(table, materials, textures, view, shading, config, buf, r0, r1);
    });
    if (stats) {
        stats->triangle_stage += table.size();
        stats->fragments += fragments;
    }
    return buf;
}

/// One pass per view over the whole triangle table.
inline std::vector<ViewBuffer> render_mvr(std::span<const FrameTriangle> table, std::span<const Material> materials,
                                          std::span<const MipPyramid> textures, std::span<const ViewCamera> views,
                                          const ShadingContext& shading, const RasterConfig& config = {},
                                          RasterStats* stats = nullptr) {
    const auto start = std::chrono::steady_clock::now();
    for (const auto& t : table)
        if (t.material >= materials.size()) throw Error(ErrorKind::IndexOutOfRange, "triangle references a missing material");
    std::vector<ViewBuffer> buffers;
    buffers.reserve(views.size());
    for (const auto& v : views) buffers.emplace_back(v.width, v.height);
    std::atomic<std::uint64_t> fragments{0};
    parallel_for(views.size(), config.workers, [&](std::size_t v) {
        fragments += rasterize_rows(table, materials, textures, views[v], shading, config, buffers[v], 0, views[v].height);
    });
    if (stats) {
        stats->triangle_stage += static_cast<std::uint64_t>(table.size()) * views.size();
        stats->fragments += fragments;
        stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return buffers;
}

/// Integer-factor box reduction (factor 1 returns the input).
inline Image8 reduce_to(const Image8& img, int width, int height) {
    if (img.width == width && img.height == height) return img;
    if (img.width == 2 * width && img.height == 2 * height) return downsample_supersampled(img);
    throw Error(ErrorKind::DimensionMismatch, "gold standard resolution must be 1x or 2x the comparison resolution");
}

struct GoldStandard {
    std::vector<Image8> views;  // gold_view_count views at comparison resolution
    Image8 eia;
    Image8 single_view;         // reference for view index V/2 of a V-view array
    RasterStats stats;
};

/// Renders the high-quality reference for a display configuration: many views at high
/// resolution with anisotropic probing, reduced to the comparison resolution and interleaved
/// with Gaussian spatial reconstruction.
inline GoldStandard render_gold_standard(std::span<const FrameTriangle> table, std::span<const Material> materials,
                                         std::span<const MipPyramid> textures, const LfdConfig& config,
                                         const Framing& framing, const ShadingContext& shading, RasterConfig rc) {
    rc.mode = RasterMode::GoldStandard;
    if (rc.gold_view_count != config.view_count && rc.gold_view_count != 2 * config.view_count)
        throw Error(ErrorKind::InvalidConfig, "gold standard view count must be V or 2V");
    const auto start = std::chrono::steady_clock::now();
    GoldStandard g;
    const auto cams = build_view_array(config, framing, rc.gold_view_count, rc.gold_width, rc.gold_height);
    g.views.reserve(cams.size());
    for (const auto& cam : cams) {
        const ViewBuffer buf = rasterize_view(table, materials, textures, cam, shading, rc, &g.stats);
        g.views.push_back(reduce_to(resolve_color(buf), config.view_width, config.view_height));
    }
    const int mid = config.view_count / 2;
    const ViewCamera center = make_camera(config, framing, mid, eye_offset_mm(config, mid, config.view_count),
                                          rc.gold_width, rc.gold_height);
    g.single_view = reduce_to(resolve_color(rasterize_view(table, materials, textures, center, shading, rc)),
                              config.view_width, config.view_height);
    ReconstructionConfig recon;
    recon.mode = ReconMode::Spatial;
    recon.samples = rc.gold_samples;
    recon.seed = rc.seed;
    g.eia = interleave(g.views, config, recon, rc.workers);
    g.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return g;
}

}  // namespace lfdpr
