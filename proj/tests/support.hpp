// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Small fixtures shared by the unit tests and the acceptance run.

#pragma once

#include <lfdpr/lfd_model.hpp>
#include <lfdpr/math.hpp>
#include <lfdpr/mipmap.hpp>
#include <lfdpr/scene.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lfdpr::testing {

inline std::filesystem::path source_dir() { return LFDPR_SOURCE_DIR; }
inline std::filesystem::path display_path() { return source_dir() / "displays" / "prototype_tilted.cfg"; }
inline std::filesystem::path asset_path(const std::string& scene) { return source_dir() / "assets" / scene / (scene + ".obj"); }

/// Appends an axis-aligned rectangle in the plane z = z0 facing +z, uv (0,0) at the top left.
inline void add_quad(TriangleMesh& mesh, Vec3 center, double width, double height, std::uint32_t material,
                     Vec2 uv_scale = {1, 1}) {
    const auto base = static_cast<std::uint32_t>(mesh.positions.size());
    const double hw = 0.5 * width, hh = 0.5 * height;
    const Vec3 corners[4] = {{center.x - hw, center.y + hh, center.z},
                             {center.x - hw, center.y - hh, center.z},
                             {center.x + hw, center.y - hh, center.z},
                             {center.x + hw, center.y + hh, center.z}};
    const Vec2 uvs[4] = {{0, 0}, {0, uv_scale.y}, {uv_scale.x, uv_scale.y}, {uv_scale.x, 0}};
    for (int k = 0; k < 4; ++k) {
        mesh.positions.push_back(corners[k]);
        mesh.normals.push_back({0, 0, 1});
        mesh.uvs.push_back(uvs[k]);
    }
    mesh.triangles.push_back({{base, base + 1, base + 2}, material});
    mesh.triangles.push_back({{base, base + 2, base + 3}, material});
}

/// Appends one triangle; normals follow the winding.
inline void add_triangle(TriangleMesh& mesh, Vec3 a, Vec3 b, Vec3 c, std::uint32_t material, Vec2 ta = {0, 0},
                         Vec2 tb = {1, 0}, Vec2 tc = {0, 1}) {
    const auto base = static_cast<std::uint32_t>(mesh.positions.size());
    const Vec3 n = normalize(cross(b - a, c - a));
    for (const auto& [p, t] : {std::pair{a, ta}, std::pair{b, tb}, std::pair{c, tc}}) {
        mesh.positions.push_back(p);
        mesh.normals.push_back(n);
        mesh.uvs.push_back(t);
    }
    mesh.triangles.push_back({{base, base + 1, base + 2}, material});
}

inline ImageF constant_image(int w, int h, int channels, float value) {
    ImageF img(w, h, channels);
    for (auto& v : img.data) v = value;
    return img;
}

inline ImageF checkerboard(int w, int h, int period = 1, int channels = 1) {
    ImageF img(w, h, channels);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c) img.at(x, y, c) = ((x / period + y / period) % 2) ? 1.0f : 0.0f;
    return img;
}

/// The bundled display with a smaller panel and view array for fast tests.
inline LfdConfig small_display(int views = 8, int width = 64, int height = 48) {
    LfdConfig c;
    c.view_count = views;
    c.view_width = width;
    c.view_height = height;
    return c;
}

/// Bundled pitches on a panel a tenth of the size: 48 whole lenses of 24 subpixels each.
inline LfdConfig small_panel(int views = 8, int width = 32, int height = 24) {
    LfdConfig c = small_display(views, width, height);
    c.panel_width = 384;
    c.panel_height = 216;
    c.screen_width_mm = 384 * c.pixel_pitch_mm;
    c.screen_height_mm = 216 * c.pixel_pitch_mm;
    c.lens_width_mm = 0.72;
    c.lens_count = c.screen_width_mm / c.lens_width_mm;
    return c;
}

/// Framing whose focal rectangle is `width` wide centered at the origin.
inline Framing centered_framing(double width = 2.0) {
    Framing f;
    f.focal_center = {0, 0, 0};
    f.focal_width = width;
    f.near = 1e-3;
    f.far = 100.0;
    return f;
}

}  // namespace lfdpr::testing
