// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <lfdpr/pointgen.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

namespace lfdpr {
namespace {

using testing::add_quad;
using testing::add_triangle;

// Square focal rectangle so view pixels are X_v x Y_v cells of a unit quad.
Framing unit_framing() {
    Framing f = testing::centered_framing(1.0);
    f.focal_height = 1.0;
    return f;
}

std::vector<ViewCamera> single_view(int w, int h, const Framing& f = unit_framing()) {
    return build_view_array(testing::small_display(2, w, h), f, 1, w, h);
}

FrameTriangle frame_of(const TriangleMesh& mesh, std::size_t t = 0) { return make_frame_triangle(mesh, t); }

TEST(SplatPointLayout, EightyBytes) {
    EXPECT_EQ(sizeof(SplatPoint), 80u);
    SplatPoint p{};
    p.triangle = 12345 | SplatPoint::kInteriorBit;
    EXPECT_EQ(p.triangle_id(), 12345u);
    EXPECT_TRUE(p.interior());
}

TEST(Cull, BehindAllCamerasIsCulled) {
    const auto views = build_view_array(testing::small_display(8), unit_framing(), 8, 64, 48);
    TriangleMesh mesh;
    const double z = views[0].eye.z + 1.0;
    add_triangle(mesh, {-0.1, -0.1, z}, {0.1, -0.1, z}, {0, 0.1, z}, 0);
    EXPECT_FALSE(cull_triangle(frame_of(mesh), views));
}

TEST(Cull, FocalPlaneCenterIsVisible) {
    const auto views = build_view_array(testing::small_display(8), unit_framing(), 8, 64, 48);
    TriangleMesh mesh;
    add_triangle(mesh, {-0.1, -0.1, 0}, {0.1, -0.1, 0}, {0, 0.1, 0}, 0);
    EXPECT_TRUE(cull_triangle(frame_of(mesh), views));
}

TEST(Cull, BackFacingEverywhereIsCulled) {
    const auto views = build_view_array(testing::small_display(8), unit_framing(), 8, 64, 48);
    TriangleMesh mesh;
    add_triangle(mesh, {-0.1, -0.1, 0}, {0, 0.1, 0}, {0.1, -0.1, 0}, 0);
    EXPECT_FALSE(cull_triangle(frame_of(mesh), views));
}

// Exact per-view oracle: front facing and a positive clipped area inside the viewport.
bool seen_by(const ViewCamera& v, const FrameTriangle& t) {
    return front_facing(t, v.eye) && projected_area(v, t.p[0], t.p[1], t.p[2]) > 0;
}

TEST(Cull, VisibleInASingleViewIsKept) {
    const auto views = build_view_array(testing::small_display(8), unit_framing(), 8, 64, 48);
    // Behind the focal plane past the left edge, only the outermost sheared frustum reaches.
    int found = 0;
    for (double x = -0.5; x > -1.5 && !found; x -= 0.002) {
        TriangleMesh mesh;
        add_triangle(mesh, {x, -0.01, -0.6}, {x + 0.01, -0.01, -0.6}, {x, 0.01, -0.6}, 0);
        const FrameTriangle t = frame_of(mesh);
        int seen = 0;
        for (const auto& v : views) seen += seen_by(v, t);
        if (seen == 1 && seen_by(views.back(), t)) {
            EXPECT_TRUE(cull_triangle(t, views));
            ++found;
        }
    }
    EXPECT_EQ(found, 1);
}

TEST(Cull, NeverCullsATriangleSomeViewSees) {
    const auto views = build_view_array(testing::small_display(6), unit_framing(), 6, 48, 36);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> c(-2.0, 2.0), z(-3.0, 0.8), e(-0.2, 0.2);
    int seen_total = 0, hidden_total = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        const Vec3 o{c(rng), c(rng), z(rng)};
        TriangleMesh mesh;
        add_triangle(mesh, o, o + Vec3{e(rng), e(rng), e(rng)}, o + Vec3{e(rng), e(rng), e(rng)}, 0);
        if (!(mesh.world_area(0) > 1e-8)) continue;
        const FrameTriangle t = frame_of(mesh);
        bool seen = false;
        for (const auto& v : views) seen |= seen_by(v, t);
        if (seen) {
            ASSERT_TRUE(cull_triangle(t, views)) << "trial " << trial;
            ++seen_total;
        } else {
            ++hidden_total;
        }
    }
    EXPECT_GT(seen_total, 100);
    EXPECT_GT(hidden_total, 100);
}

TEST(PixelEdgeDensity, FrontoParallelUnitQuad) {
    for (auto [w, h] : {std::pair{64, 48}, {480, 360}}) {
        TriangleMesh mesh;
        add_quad(mesh, {0, 0, 0}, 1.0, 1.0, 0);
        const auto views = single_view(w, h);
        for (std::size_t t = 0; t < 2; ++t) {
            const EdgeDensity e = pixel_edge_density(frame_of(mesh, t), views);
            ASSERT_EQ(e.views_used, 1);
            EXPECT_NEAR(e.s_ortho.x, w, 1e-9 * w);
            EXPECT_NEAR(e.s_ortho.y, h, 1e-9 * h);
            EXPECT_NEAR(e.size_xy, 1.0 / (static_cast<double>(w) * h), 1e-12 / (w * h));
            EXPECT_NEAR(e.s_ortho.x / e.s_ortho.y, static_cast<double>(w) / h, 1e-9);
        }
    }
}

TEST(PixelEdgeDensity, SixtyDegreeTiltHalvesHorizontalDensity) {
    // Plane through the origin turned 60 degrees about +y; the triangle's apex sits on the
    // view axis and the rest lies beyond the plane's foot point, so the apex is closest.
    const double a = std::numbers::pi / 3.0;
    const Vec3 n{std::sin(a), 0, std::cos(a)};
    const Vec3 along{std::cos(a), 0, -std::sin(a)};
    TriangleMesh mesh;
    add_triangle(mesh, {0, 0, 0}, along * 0.3 + Vec3{0, -0.1, 0}, along * 0.3 + Vec3{0, 0.1, 0}, 0);
    FrameTriangle t = frame_of(mesh);
    ASSERT_NEAR(dot(t.normal, n), 1.0, 1e-12);
    const auto views = single_view(480, 360);
    ASSERT_LT(length(closest_point_on_triangle(views[0].eye, t.p[0], t.p[1], t.p[2])), 1e-12);
    const EdgeDensity e = pixel_edge_density(t, views);
    EXPECT_NEAR(e.s_ortho.x, 480.0 * std::cos(a), 1e-3 * 480.0);
    EXPECT_NEAR(e.s_ortho.y, 360.0, 1e-3 * 360.0);
}

TEST(PixelEdgeDensity, AggregatesDensestViewAndSmallestPixel) {
    TriangleMesh mesh;
    add_triangle(mesh, {-0.3, -0.2, -0.5}, {0.4, -0.2, -0.2}, {0.0, 0.3, -0.4}, 0);
    const FrameTriangle t = frame_of(mesh);
    const auto views = build_view_array(testing::small_display(6), unit_framing(), 6, 96, 72);
    const EdgeDensity all = pixel_edge_density(t, views);
    double sx = 0, sy = 0, area = 1e300, area_max = 0;
    for (const auto& v : views) {
        const EdgeDensity one = pixel_edge_density(t, std::span<const ViewCamera>(&v, 1));
        ASSERT_EQ(one.views_used, 1);
        sx = std::max(sx, one.s_ortho.x);
        sy = std::max(sy, one.s_ortho.y);
        area = std::min(area, one.size_xy);
        area_max = std::max(area_max, one.size_xy);
    }
    EXPECT_DOUBLE_EQ(all.s_ortho.x, sx);
    EXPECT_DOUBLE_EQ(all.s_ortho.y, sy);
    EXPECT_DOUBLE_EQ(all.size_xy, area);
    EXPECT_DOUBLE_EQ(all.area_max, area_max);
}

struct TextureSet {
    std::vector<MipPyramid> textures;
    std::vector<Material> materials;
};

TextureSet textures_of(std::initializer_list<int> sizes) {
    TextureSet s;
    Material m;
    int slot = 0;
    for (int size : sizes) {
        m.textures[slot++] = static_cast<int>(s.textures.size());
        s.textures.emplace_back(testing::constant_image(size, size, 3, 0.5f));
    }
    s.materials.push_back(m);
    return s;
}

TEST(TexelDensity, HalfOfA256Texture) {
    TriangleMesh mesh;
    add_triangle(mesh, {0, 0, 0}, {2, 0, 0}, {0, 2, 0}, 0, {0, 0}, {1, 0}, {0, 1});
    const FrameTriangle t = frame_of(mesh);
    ASSERT_DOUBLE_EQ(t.texture_area, 0.5);
    const TextureSet ts = textures_of({256});
    const TexelDensity d = texel_density(t, ts.materials[0], ts.textures);
    EXPECT_DOUBLE_EQ(d.n_tex, 32768.0);
    EXPECT_DOUBLE_EQ(d.size_uv, t.world_area / 32768.0);
}

TEST(TexelDensity, LargestTextureWins) {
    TriangleMesh mesh;
    add_triangle(mesh, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0, {0, 0}, {1, 0}, {0, 1});
    const TextureSet ts = textures_of({256, 1024});
    EXPECT_DOUBLE_EQ(texel_density(frame_of(mesh), ts.materials[0], ts.textures).n_tex, 524288.0);
}

TEST(TexelDensity, UntexturedAndZeroTextureArea) {
    TriangleMesh mesh;
    add_triangle(mesh, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5});
    const FrameTriangle t = frame_of(mesh);
    const TexelDensity plain = texel_density(t, Material{}, {});
    EXPECT_EQ(plain.size_uv, 0.0);
    EXPECT_FALSE(plain.zero_texture_area);
    const TextureSet ts = textures_of({64});
    const TexelDensity flat = texel_density(t, ts.materials[0], ts.textures);
    EXPECT_EQ(flat.size_uv, 0.0);
    EXPECT_TRUE(flat.zero_texture_area);
}

TEST(AdjustDensity, TexelBranch) {
    const Vec2 s{480, 360};
    const Vec2 same = adjust_density(s, 1e-4, 1e-4);
    EXPECT_EQ(same.x, 480);
    EXPECT_EQ(same.y, 360);
    const Vec2 half = adjust_density(s, 1e-4, 4e-4);
    EXPECT_DOUBLE_EQ(half.x, 240);
    EXPECT_DOUBLE_EQ(half.y, 180);
    const Vec2 none = adjust_density(s, 1e-4, 0.0);
    EXPECT_EQ(none.x, 480);
    const Vec2 finer = adjust_density(s, 1e-4, 1e-5);
    EXPECT_EQ(finer.x, 480);
}

TEST(LodBand, TextureLodExamples) {
    const MipPyramid tex(testing::constant_image(256, 256, 1, 0.0f));
    const double texel = 1.0 / (256.0 * 256.0);
    EXPECT_DOUBLE_EQ(texture_lod(texel, tex), 0.0);
    EXPECT_DOUBLE_EQ(texture_lod(16 * texel, tex), 2.0);
    EXPECT_DOUBLE_EQ(texture_lod(0.25 * texel, tex), 0.0);   // clamped below
    EXPECT_DOUBLE_EQ(texture_lod(1e9 * texel, tex), 8.0);    // clamped to the top level
}

TEST(LodBand, SingleViewCollapses) {
    TriangleMesh mesh;
    add_triangle(mesh, {-0.3, -0.2, -0.5}, {0.4, -0.2, -0.2}, {0.0, 0.3, -0.4}, 0, {0, 0}, {2, 0}, {0, 2});
    const FrameTriangle t = frame_of(mesh);
    const TextureSet ts = textures_of({128});
    const auto views = single_view(96, 72);
    const LodBand b = lod_band(t, pixel_edge_density(t, views), ts.materials[0], ts.textures);
    EXPECT_EQ(b.vpuv_min, b.vpuv_max);
    EXPECT_EQ(b.lod_min[0], b.lod_max[0]);
}

TEST(LodBand, OrderedForRandomTriangles) {
    const auto views = build_view_array(testing::small_display(8), unit_framing(), 8, 64, 48);
    const TextureSet ts = textures_of({64, 512});
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> c(-0.6, 0.6), z(-1.5, 0.3), uv(-2, 2);
    for (int trial = 0; trial < 500; ++trial) {
        TriangleMesh mesh;
        add_triangle(mesh, {c(rng), c(rng), z(rng)}, {c(rng), c(rng), z(rng)}, {c(rng), c(rng), z(rng)}, 0,
                     {uv(rng), uv(rng)}, {uv(rng), uv(rng)}, {uv(rng), uv(rng)});
        const FrameTriangle t = frame_of(mesh);
        if (!(t.world_area > 1e-6)) continue;
        const EdgeDensity e = pixel_edge_density(t, views);
        if (e.views_used == 0) continue;
        const LodBand b = lod_band(t, e, ts.materials[0], ts.textures);
        EXPECT_LE(b.vpuv_min, b.vpuv_max);
        for (int s = 0; s < 2; ++s) EXPECT_LE(b.lod_min[s], b.lod_max[s]);
    }
}

// Sampling plan with a chosen density for a triangle in the z = 0 plane.
SamplingPlan plan_for(const FrameTriangle& t, Vec2 s) {
    SamplingPlan p;
    p.origin = t.centroid;
    p.axis_x = t.axis_x;
    p.axis_y = t.axis_y;
    p.s_ortho = s;
    return p;
}

TEST(EmitPoints, UnitRightTriangleAtHalfSpacing) {
    TriangleMesh mesh;
    add_triangle(mesh, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0);
    const FrameTriangle t = frame_of(mesh);
    ASSERT_NEAR(t.axis_x.x, 1.0, 1e-12);
    ASSERT_NEAR(t.axis_y.y, 1.0, 1e-12);
    std::vector<SplatPoint> out;
    const Material m;
    const std::size_t n = emit_points(t, 0, plan_for(t, {2, 2}), LodBand{}, m, {}, EmitOptions{}, out);
    ASSERT_EQ(n, 3u);
    ASSERT_EQ(out.size(), 3u);
    std::vector<std::pair<double, double>> centres;
    for (const auto& p : out) {
        EXPECT_FLOAT_EQ(p.extents[0], 0.25f);
        EXPECT_FLOAT_EQ(p.extents[1], 0.25f);
        centres.emplace_back(p.position[0], p.position[1]);
    }
    std::sort(centres.begin(), centres.end());
    const std::vector<std::pair<double, double>> expect{{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}};
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(centres[k].first, expect[k].first, 1e-6);
        EXPECT_NEAR(centres[k].second, expect[k].second, 1e-6);
    }
}

TEST(EmitPoints, TriangleSmallerThanACellGivesOneCentroidPoint) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-3, 3), e(0.0, 0.09);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 o{u(rng), u(rng), 0};
        TriangleMesh mesh;
        add_triangle(mesh, o, o + Vec3{0.02 + e(rng), 0, 0}, o + Vec3{e(rng) - 0.05, 0.02 + e(rng), 0}, 0);
        const FrameTriangle t = frame_of(mesh);
        std::vector<SplatPoint> out;
        ASSERT_EQ(emit_points(t, 7, plan_for(t, {5, 5}), LodBand{}, Material{}, {}, EmitOptions{}, out), 1u);
        EXPECT_NEAR(out[0].position[0], t.centroid.x, 1e-5);
        EXPECT_NEAR(out[0].position[1], t.centroid.y, 1e-5);
        EXPECT_EQ(out[0].triangle_id(), 7u);
        EXPECT_FALSE(out[0].interior());
        // The enlarged splat covers every vertex.
        for (const auto& p : t.p) {
            EXPECT_LE(std::abs(dot(p - t.centroid, t.axis_x)), out[0].extents[0] + 1e-6);
            EXPECT_LE(std::abs(dot(p - t.centroid, t.axis_y)), out[0].extents[1] + 1e-6);
        }
    }
}

TEST(EmitPoints, CountScalesWithDensityProduct) {
    TriangleMesh mesh;
    add_triangle(mesh, {-0.7, -0.4, 0}, {0.9, -0.5, 0}, {0.1, 0.8, 0}, 0);
    const FrameTriangle t = frame_of(mesh);
    auto count = [&](Vec2 s) {
        std::vector<SplatPoint> out;
        return static_cast<double>(emit_points(t, 0, plan_for(t, s), LodBand{}, Material{}, {}, EmitOptions{}, out));
    };
    for (Vec2 s : {Vec2{40, 30}, Vec2{64, 64}, Vec2{90, 50}}) {
        const double n1 = count(s), n2 = count(s * 2.0);
        EXPECT_NEAR(n2 / n1, 4.0, 0.4) << s.x << "," << s.y;
        EXPECT_NEAR(n1, t.world_area * s.x * s.y, 0.1 * t.world_area * s.x * s.y);
    }
}

TEST(EmitPoints, CellsTileTheTriangle) {
    // Every point of the triangle lies in some emitted splat rectangle.
    TriangleMesh mesh;
    add_triangle(mesh, {-0.7, -0.4, 0.1}, {0.9, -0.5, -0.2}, {0.1, 0.8, 0.0}, 0);
    const FrameTriangle t = frame_of(mesh);
    std::vector<SplatPoint> out;
    emit_points(t, 0, plan_for(t, {23, 17}), LodBand{}, Material{}, {}, EmitOptions{}, out);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 5000; ++k) {
        double a = u(rng), b = u(rng);
        if (a + b > 1) a = 1 - a, b = 1 - b;
        const Vec3 q = t.p[0] + (t.p[1] - t.p[0]) * a + (t.p[2] - t.p[0]) * b;
        bool covered = false;
        for (const auto& p : out) {
            const Vec3 d = q - p.world();
            if (std::abs(dot(d, t.axis_x)) <= p.extents[0] + 1e-6 && std::abs(dot(d, t.axis_y)) <= p.extents[1] + 1e-6) {
                covered = true;
                break;
            }
        }
        ASSERT_TRUE(covered) << "sample " << k;
    }
}

TEST(EmitPoints, InteriorFlagMeansSplatInsideTriangle) {
    TriangleMesh mesh;
    add_triangle(mesh, {-0.7, -0.4, 0}, {0.9, -0.5, 0}, {0.1, 0.8, 0}, 0);
    const FrameTriangle t = frame_of(mesh);
    std::vector<SplatPoint> out;
    emit_points(t, 0, plan_for(t, {30, 30}), LodBand{}, Material{}, {}, EmitOptions{}, out);
    std::array<Vec2, 3> q;
    for (int k = 0; k < 3; ++k) q[k] = {t.p[k].x, t.p[k].y};
    int interior = 0;
    for (const auto& p : out) {
        if (!p.interior()) continue;
        ++interior;
        for (double sx : {-1.0, 1.0})
            for (double sy : {-1.0, 1.0}) {
                const Vec2 c{p.position[0] + sx * p.extents[0] * (1 - 1e-5), p.position[1] + sy * p.extents[1] * (1 - 1e-5)};
                EXPECT_TRUE(detail::inside_triangle(q, c));
            }
    }
    EXPECT_GT(interior, static_cast<int>(out.size()) / 2);
}

TEST(EmitPoints, UvAndBandValuesFromTextures) {
    TriangleMesh mesh;
    add_triangle(mesh, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0, {0, 0}, {1, 0}, {0, 1});
    const FrameTriangle t = frame_of(mesh);
    ImageF img(16, 16, 3);
    std::mt19937 rng(1);
    std::uniform_real_distribution<float> u(0.2f, 0.7f);
    for (auto& v : img.data) v = u(rng);
    std::vector<MipPyramid> textures{MipPyramid(img)};
    Material m;
    m.textures[0] = 0;
    LodBand band;
    band.lod_min[0] = 0.5;
    band.lod_max[0] = 2.5;
    band.vpuv_min = 1e-3;
    band.vpuv_max = 4e-3;
    std::vector<SplatPoint> out;
    emit_points(t, 0, plan_for(t, {8, 8}), band, m, textures, EmitOptions{}, out);
    ASSERT_FALSE(out.empty());
    for (const auto& p : out) {
        // uv is the barycentric map of the (clamped) cell center; here uv = (x, y).
        EXPECT_NEAR(p.uv[0], std::clamp<double>(p.position[0], 0, 1), 0.07);
        const Texel lo = textures[0].sample_trilinear({p.uv[0], p.uv[1]}, 0.5);
        const Texel hi = textures[0].sample_trilinear({p.uv[0], p.uv[1]}, 2.5);
        for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(from_unorm16(p.tv_min[c]), lo[c], 1e-4);
            EXPECT_NEAR(from_unorm16(p.tv_max[c]), hi[c], 1e-4);
            EXPECT_GE(from_unorm16(p.tv_min[c]), 0.2 - 1e-4);
            EXPECT_LE(from_unorm16(p.tv_max[c]), 0.7 + 1e-4);
        }
        EXPECT_FLOAT_EQ(p.vpuv_min, 1e-3f);
        EXPECT_FLOAT_EQ(p.vpuv_max, 4e-3f);
    }
    out.clear();
    EmitOptions flat;
    flat.mipmapping = false;
    emit_points(t, 0, plan_for(t, {8, 8}), band, m, textures, flat, out);
    for (const auto& p : out) EXPECT_EQ(p.tv_min, p.tv_max);
}

TEST(EmitPoints, UntexturedUsesMaterialScalars) {
    TriangleMesh mesh;
    add_triangle(mesh, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0);
    const FrameTriangle t = frame_of(mesh);
    Material m;
    m.albedo = {0.1, 0.6, 0.9};
    m.roughness = 0.3;
    std::vector<SplatPoint> out;
    emit_points(t, 0, plan_for(t, {4, 4}), LodBand{}, m, {}, EmitOptions{}, out);
    for (const auto& p : out) {
        EXPECT_EQ(p.tv_min, p.tv_max);
        EXPECT_NEAR(from_unorm16(p.tv_min[1]), 0.6, 1e-4);
        EXPECT_NEAR(from_unorm16(p.tv_min[6]), 0.3, 1e-4);
    }
}

TEST(EmitPoints, CellCapBoundsHugeTriangles) {
    TriangleMesh mesh;
    add_triangle(mesh, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0);
    const FrameTriangle t = frame_of(mesh);
    std::vector<SplatPoint> out;
    EmitOptions o;
    o.max_cells = 1000;
    emit_points(t, 0, plan_for(t, {1e4, 1e4}), LodBand{}, Material{}, {}, o, out);
    EXPECT_LE(out.size(), 1000u);
    EXPECT_GT(out.size(), 400u);
}

TEST(GeneratePoints, TexelReductionIsMonotoneInTextureSize) {
    TriangleMesh mesh;
    add_quad(mesh, {0, 0, 0}, 1.0, 1.0, 0);
    const auto views = build_view_array(testing::small_display(4), unit_framing(), 4, 128, 96);
    std::size_t prev = 0;
    for (int size : {4, 16, 64, 256, 1024}) {
        const TextureSet ts = textures_of({size});
        const PointCloud c = generate_points(mesh, ts.materials, ts.textures, views, EmitOptions{}, 1);
        EXPECT_GE(c.points.size(), prev) << size;
        prev = c.points.size();
    }
    const PointCloud plain = generate_points(mesh, std::vector<Material>{Material{}}, {}, views, EmitOptions{}, 1);
    EXPECT_EQ(prev, plain.points.size());
}

TEST(GeneratePoints, StatsAndDeterminismAcrossWorkers) {
    TriangleMesh mesh;
    add_quad(mesh, {0, 0, 0}, 1.0, 1.0, 0);
    add_quad(mesh, {0.2, 0.1, -0.5}, 0.5, 0.5, 0);
    add_triangle(mesh, {-1, -1, 5}, {1, -1, 5}, {0, 1, 5}, 0);  // behind the eyes
    const auto views = build_view_array(testing::small_display(4), unit_framing(), 4, 64, 48);
    const TextureSet ts = textures_of({64});
    PointGenStats s1, s4;
    const PointCloud a = generate_points(mesh, ts.materials, ts.textures, views, EmitOptions{}, 1, &s1);
    const PointCloud b = generate_points(mesh, ts.materials, ts.textures, views, EmitOptions{}, 4, &s4);
    EXPECT_EQ(s1.triangle_stage, 5u);
    EXPECT_EQ(s1.triangles_culled, 1u);
    EXPECT_EQ(s1.points, a.points.size());
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        ASSERT_EQ(std::memcmp(&a.points[i], &b.points[i], sizeof(SplatPoint)), 0);
    std::uint64_t hist = 0;
    for (auto h : s1.histogram) hist += h;
    EXPECT_EQ(hist, 4u);
    EXPECT_THROW(generate_points(mesh, ts.materials, ts.textures, {}, EmitOptions{}, 1), Error);
}

}  // namespace
}  // namespace lfdpr
