// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <lfdpr/metrics.hpp>
#include <lfdpr/mvr_render.hpp>
#include <lfdpr/splat_render.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace lfdpr {
namespace {

using testing::add_quad;
using testing::add_triangle;

Framing unit_framing() {
    Framing f = testing::centered_framing(1.0);
    f.focal_height = 1.0;
    return f;
}

std::vector<ViewCamera> single_view(int w = 64, int h = 48) {
    return build_view_array(testing::small_display(2, w, h), unit_framing(), 1, w, h);
}

SplatPoint point_at(Vec3 c, float ex, float ey, std::uint32_t triangle = 0) {
    SplatPoint p{};
    p.position = {static_cast<float>(c.x), static_cast<float>(c.y), static_cast<float>(c.z)};
    p.extents = {ex, ey};
    p.triangle = triangle;
    return p;
}

FrameTriangle facing_triangle() {
    TriangleMesh mesh;
    add_triangle(mesh, {-1, -1, 0}, {1, -1, 0}, {0, 1, 0}, 0);
    return make_frame_triangle(mesh, 0);
}

TEST(ProjectSplat, FocalPlanePixelSizedSplat) {
    const auto views = single_view();
    const FrameTriangle t = facing_triangle();
    const SplatPoint p = point_at({0, 0, 0}, 0.5f / 64, 0.5f / 48);
    const ProjectedSplat s = project_splat(p, t, views[0]);
    ASSERT_FALSE(s.empty);
    Vec2 mean;
    for (const auto& q : s.quad) mean += q * 0.25;
    EXPECT_NEAR(mean.x, 32.0, 1e-6);
    EXPECT_NEAR(mean.y, 24.0, 1e-6);
    EXPECT_NEAR(s.x1 - s.x0, 1.0, 1e-6);
    EXPECT_NEAR(s.y1 - s.y0, 1.0, 1e-6);
    EXPECT_NEAR(s.ndc_area(64, 48), 4.0 / (64.0 * 48.0), 1e-9);
    EXPECT_NEAR(s.depth, views[0].view_depth(p.world()), 1e-9);
}

TEST(ProjectSplat, CornersMatchCameraProjection) {
    const auto views = build_view_array(testing::small_display(8), unit_framing(), 8, 64, 48);
    TriangleMesh mesh;
    add_triangle(mesh, {-0.4, -0.3, -0.2}, {0.5, -0.1, -0.6}, {0.0, 0.4, 0.1}, 0);
    const FrameTriangle t = make_frame_triangle(mesh, 0);
    const SplatPoint p = point_at(t.centroid, 0.03f, 0.02f);
    constexpr double kSigns[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    for (const auto& v : views) {
        const ProjectedSplat s = project_splat(p, t, v);
        ASSERT_FALSE(s.empty);
        for (int k = 0; k < 4; ++k) {
            const Vec3 corner = p.world() + t.axis_x * (kSigns[k][0] * p.extents[0]) + t.axis_y * (kSigns[k][1] * p.extents[1]);
            const ScreenPoint q = v.project(corner);
            EXPECT_NEAR(s.quad[k].x, q.x, 1e-6);
            EXPECT_NEAR(s.quad[k].y, q.y, 1e-6);
        }
    }
}

TEST(ProjectSplat, BehindTheCameraIsEmpty) {
    const auto views = single_view();
    const FrameTriangle t = facing_triangle();
    EXPECT_TRUE(project_splat(point_at({0, 0, views[0].eye.z + 1}, 0.01f, 0.01f), t, views[0]).empty);
    EXPECT_TRUE(project_splat(point_at({5, 0, 0}, 0.01f, 0.01f), t, views[0]).empty);
}

TEST(ProjectSplat, MayCoverNeverRejectsAWritingSplat) {
    const auto views = build_view_array(testing::small_display(6), unit_framing(), 6, 48, 36);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> c(-0.8, 0.8), z(-2.0, 0.6), e(0.001, 0.05);
    TriangleMesh mesh;
    add_triangle(mesh, {-0.4, -0.3, -0.2}, {0.5, -0.1, -0.6}, {0.0, 0.4, 0.1}, 0);
    const FrameTriangle t = make_frame_triangle(mesh, 0);
    int rejected = 0;
    for (int k = 0; k < 3000; ++k) {
        const SplatPoint p = point_at({c(rng), c(rng), z(rng)}, static_cast<float>(e(rng)), static_cast<float>(e(rng)));
        for (const auto& v : views) {
            SplatProjector proj(t, v);
            const int x_lo = static_cast<int>(rng() % 24), y_lo = static_cast<int>(rng() % 18);
            const int x_hi = x_lo + 23, y_hi = y_lo + 17;
            if (proj.may_cover(p, x_lo, x_hi, y_lo, y_hi)) continue;
            ++rejected;
            const ProjectedSplat s = proj.project(p);
            if (s.empty) continue;
            for (int py = y_lo; py <= y_hi; ++py)
                for (int px = x_lo; px <= x_hi; ++px) {
                    const Vec2 q{px + 0.5, py + 0.5};
                    bool inside = true;
                    const double sign = s.signed_area() >= 0 ? 1 : -1;
                    for (int i = 0; i < 4; ++i)
                        inside &= sign * cross(s.quad[(i + 1) % 4] - s.quad[i], q - s.quad[i]) >= -1e-6;
                    ASSERT_FALSE(inside) << "point " << k << " view " << v.index;
                }
        }
    }
    EXPECT_GT(rejected, 1000);
}

TEST(FillSplat, NearestDepthWinsInAnyOrder) {
    const auto views = single_view();
    const FrameTriangle t = facing_triangle();
    const SplatPoint near = point_at({0, 0, 0.1}, 0.1f, 0.1f), far = point_at({0.05, 0, -0.1}, 0.1f, 0.1f);
    const ProjectedSplat sn = project_splat(near, t, views[0]), sf = project_splat(far, t, views[0]);
    ViewBuffer a(64, 48), b(64, 48);
    fill_splat(sn, nullptr, views[0], a, 1u);
    fill_splat(sf, nullptr, views[0], a, 2u);
    fill_splat(sf, nullptr, views[0], b, 2u);
    fill_splat(sn, nullptr, views[0], b, 1u);
    int near_pixels = 0, far_pixels = 0;
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 64; ++x) {
            ASSERT_EQ(a.word(x, y), b.word(x, y));
            const std::uint32_t payload = static_cast<std::uint32_t>(a.word(x, y));
            near_pixels += payload == 1;
            far_pixels += payload == 2;
        }
    EXPECT_GT(near_pixels, 0);
    EXPECT_GT(far_pixels, 0);  // the far splat sticks out to the right
}

TEST(FillSplat, PayloadEvaluatedOnlyForWinningPixels) {
    const auto views = single_view();
    const FrameTriangle t = facing_triangle();
    const ProjectedSplat s = project_splat(point_at({0, 0, 0}, 0.1f, 0.1f), t, views[0]);
    ViewBuffer buf(64, 48);
    int calls = 0;
    fill_splat(s, nullptr, views[0], buf, [&] { return ++calls, 5u; });
    EXPECT_EQ(calls, 1);
    const ProjectedSplat behind = project_splat(point_at({0, 0, -0.5}, 0.05f, 0.05f), t, views[0]);
    EXPECT_EQ(fill_splat(behind, nullptr, views[0], buf, [&] { return ++calls, 6u; }), 0u);
    EXPECT_EQ(calls, 1);
}

TEST(FillSplat, ClippingMatchesTriangleCoverage) {
    const auto views = build_view_array(testing::small_display(4), unit_framing(), 4, 64, 48);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.6, 0.6), z(-0.5, 0.3);
    for (int trial = 0; trial < 60; ++trial) {
        TriangleMesh mesh;
        add_triangle(mesh, {u(rng), u(rng), z(rng)}, {u(rng), u(rng), z(rng)}, {u(rng), u(rng), z(rng)}, 0);
        FrameTriangle t = make_frame_triangle(mesh, 0);
        if (!(t.world_area > 1e-3)) continue;
        // One splat much larger than the triangle: the clip alone decides coverage.
        const SplatPoint p = point_at(t.centroid, 3.0f, 3.0f);
        for (const auto& v : views) {
            const TriangleSetup setup(v, t.p[0], t.p[1], t.p[2]);
            if (!setup.visible() || !front_facing(t, v.eye)) continue;
            const ProjectedSplat s = project_splat(p, t, v);
            if (s.empty) continue;
            ViewBuffer buf(v.width, v.height);
            fill_splat(s, &setup, v, buf, 1u);
            for (int py = 0; py < v.height; ++py)
                for (int px = 0; px < v.width; ++px) {
                    const bool covered = px >= setup.min_x() && px <= setup.max_x() && py >= setup.min_y() &&
                                         py <= setup.max_y() && setup.covering_fan(px, py) >= 0;
                    ASSERT_EQ(buf.word(px, py) != ViewBuffer::kClear, covered) << trial << " " << px << "," << py;
                }
        }
    }
}

TEST(InterpolateTv, BlendsAcrossTheBand) {
    SplatPoint p = point_at({0, 0, 0}, 0.5f, 0.5f);
    p.vpuv_min = 1.0f;
    p.vpuv_max = 4.0f;
    p.tv_min.fill(0);
    p.tv_max.fill(65535);
    const double pixel = 4.0 / (10.0 * 10.0);
    // size_uv = 4 ex ey ratio = 1: the band's low end.
    EXPECT_FLOAT_EQ(interpolate_tv(p, 1.0, pixel, 10, 10)[0], 0.0f);
    // The splat covers half a pixel: effective size 2.
    EXPECT_NEAR(interpolate_tv(p, 1.0, 0.5 * pixel, 10, 10)[4], 1.0 / 3.0, 1e-6);
    // Texture ratio 2.5: effective size 2.5, midway.
    EXPECT_NEAR(interpolate_tv(p, 2.5, pixel, 10, 10)[8], 0.5, 1e-6);
    // Above the band clamps to the high end.
    EXPECT_FLOAT_EQ(interpolate_tv(p, 100.0, pixel, 10, 10)[2], 1.0f);
    // Coverage never exceeds one pixel.
    EXPECT_FLOAT_EQ(interpolate_tv(p, 1.0, 50 * pixel, 10, 10)[0], 0.0f);
}

TEST(InterpolateTv, CollapsedBandReturnsTheStoredValues) {
    SplatPoint p = point_at({0, 0, 0}, 0.5f, 0.5f);
    p.vpuv_min = p.vpuv_max = 2.0f;
    for (int k = 0; k < kSurfaceChannels; ++k) p.tv_min[k] = p.tv_max[k] = static_cast<std::uint16_t>(1000 * k);
    const SurfaceChannels c = interpolate_tv(p, 7.0, 0.01, 64, 48);
    for (int k = 0; k < kSurfaceChannels; ++k) EXPECT_FLOAT_EQ(c[k], static_cast<float>(from_unorm16(p.tv_min[k])));
}

struct QuadScene {
    TriangleMesh mesh;
    std::vector<Material> materials;
    std::vector<MipPyramid> textures;
};

QuadScene quad_scene(bool textured) {
    QuadScene s;
    add_quad(s.mesh, {0, 0, 0}, 0.8, 0.6, 0, {3.0, 3.0});
    add_quad(s.mesh, {0.2, 0.1, -0.3}, 0.3, 0.3, 0, {1.0, 1.0});
    Material m;
    m.albedo = {0.7, 0.4, 0.2};
    if (textured) {
        m.textures[0] = 0;
        s.textures.emplace_back(testing::checkerboard(64, 64, 4, 3));
    }
    s.materials.push_back(m);
    return s;
}

ShadingContext test_light() {
    ShadingContext c;
    c.light_direction = normalize(Vec3{0.3, 0.5, 1.0});
    c.ambient = {0.1, 0.1, 0.1};
    return c;
}

TEST(RenderViews, MatchesRasterizerOnAFlatScene) {
    const QuadScene s = quad_scene(false);
    const auto views = single_view(96, 72);
    const PointCloud cloud = generate_points(s.mesh, s.materials, s.textures, views, EmitOptions{}, 1);
    const auto splat = render_views(cloud, views, test_light());
    const auto table = build_triangle_table(s.mesh);
    const auto mvr = render_mvr(table, s.materials, s.textures, views, test_light());
    const Mask ms = coverage_mask(splat[0]), mm = coverage_mask(mvr[0]);
    std::size_t disagree = 0, compared = 0;
    const Image8 a = resolve_color(splat[0]), b = resolve_color(mvr[0]);
    const Mask inner = erode(mm, 1);
    for (int y = 0; y < 72; ++y)
        for (int x = 0; x < 96; ++x) {
            disagree += ms.at(x, y) != mm.at(x, y);
            if (!inner.at(x, y)) continue;
            ++compared;
            for (int c = 0; c < 3; ++c) ASSERT_NEAR(a.at(x, y, c), b.at(x, y, c), 2) << x << "," << y;
        }
    EXPECT_EQ(disagree, 0u);
    EXPECT_GT(compared, 1000u);
}

TEST(RenderViews, EmptyCloudLeavesBuffersClear) {
    const auto views = build_view_array(testing::small_display(4), unit_framing(), 4, 32, 24);
    SplatStats stats;
    const auto buffers = render_views(PointCloud{}, views, test_light(), {}, &stats);
    ASSERT_EQ(buffers.size(), 4u);
    for (const auto& b : buffers)
        for (int y = 0; y < 24; ++y)
            for (int x = 0; x < 32; ++x) ASSERT_EQ(b.word(x, y), ViewBuffer::kClear);
    EXPECT_EQ(stats.writes, 0u);
}

TEST(RenderViews, IndependentOfPointOrderWorkersAndChunking) {
    const QuadScene s = quad_scene(true);
    const auto views = build_view_array(testing::small_display(6), unit_framing(), 6, 64, 48);
    PointCloud cloud = generate_points(s.mesh, s.materials, s.textures, views, EmitOptions{}, 1);
    ASSERT_GT(cloud.points.size(), 1000u);
    const auto reference = render_views(cloud, views, test_light());
    std::mt19937_64 rng(3);
    for (int workers : {1, 4, 8}) {
        std::shuffle(cloud.points.begin(), cloud.points.end(), rng);
        SplatOptions o;
        o.workers = workers;
        o.chunk_points = 1 + rng() % 500;
        const auto out = render_views(cloud, views, test_light(), o);
        for (std::size_t v = 0; v < views.size(); ++v)
            for (int y = 0; y < 48; ++y)
                for (int x = 0; x < 64; ++x) ASSERT_EQ(out[v].word(x, y), reference[v].word(x, y)) << workers;
    }
}

TEST(RenderViews, FullCoverageOfTexturedQuads) {
    const QuadScene s = quad_scene(true);
    const auto views = build_view_array(testing::small_display(8), unit_framing(), 8, 96, 72);
    const PointCloud cloud = generate_points(s.mesh, s.materials, s.textures, views, EmitOptions{}, 1);
    const auto splat = render_views(cloud, views, test_light());
    const auto mvr = render_mvr(build_triangle_table(s.mesh), s.materials, s.textures, views, test_light());
    for (std::size_t v = 0; v < views.size(); ++v)
        EXPECT_GE(coverage_agreement(coverage_mask(splat[v]), coverage_mask(mvr[v])), 0.999) << "view " << v;
}

TEST(RenderViews, RejectsMissingTriangles) {
    PointCloud cloud;
    cloud.points.push_back(point_at({0, 0, 0}, 0.1f, 0.1f, 3));
    EXPECT_THROW(render_views(cloud, single_view(), test_light()), Error);
}

}  // namespace
}  // namespace lfdpr
