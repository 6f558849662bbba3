// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Shading shared by both renderers: Lambert diffuse + GGX specular in the metallic
// workflow, tangent-space normal mapping, one directional light plus an ambient term
// scaled by occlusion.

#pragma once

#include <lfdpr/math.hpp>
#include <lfdpr/mipmap.hpp>
#include <lfdpr/raster.hpp>
#include <lfdpr/scene.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace lfdpr {

struct ShadingContext {
    Vec3 light_direction{0, 0, 1};  // unit, pointing toward the light
    Vec3 light_color{1, 1, 1};
    Vec3 ambient{0, 0, 0};
};

/// Texture values for one surface sample, every channel in [0, 1].
struct SurfaceValues {
    std::array<float, 3> albedo{0.8f, 0.8f, 0.8f};
    std::array<float, 3> normal{0.5f, 0.5f, 1.0f};  // tangent space, encoded as n * 0.5 + 0.5
    float roughness = 0.5f;
    float metallic = 0.0f;
    float occlusion = 1.0f;
};

/// Channel layout used when surface values travel as a flat vector (point records).
inline constexpr int kSurfaceChannels = 9;
using SurfaceChannels = std::array<float, kSurfaceChannels>;

inline SurfaceChannels flatten(const SurfaceValues& s) {
    return {s.albedo[0], s.albedo[1], s.albedo[2], s.normal[0], s.normal[1], s.normal[2],
            s.roughness, s.metallic, s.occlusion};
}

inline SurfaceValues unflatten(const SurfaceChannels& c) {
    SurfaceValues s;
    s.albedo = {c[0], c[1], c[2]};
    s.normal = {c[3], c[4], c[5]};
    s.roughness = c[6];
    s.metallic = c[7];
    s.occlusion = c[8];
    return s;
}

/// Material scalar fallbacks, used for every slot without a texture.
inline SurfaceValues material_defaults(const Material& m) {
    SurfaceValues s;
    s.albedo = {static_cast<float>(std::clamp(m.albedo.x, 0.0, 1.0)), static_cast<float>(std::clamp(m.albedo.y, 0.0, 1.0)),
                static_cast<float>(std::clamp(m.albedo.z, 0.0, 1.0))};
    s.roughness = static_cast<float>(std::clamp(m.roughness, 0.0, 1.0));
    s.metallic = static_cast<float>(std::clamp(m.metallic, 0.0, 1.0));
    s.occlusion = static_cast<float>(std::clamp(m.occlusion, 0.0, 1.0));
    return s;
}

/// Writes one texture fetch into the slot's channels (gray textures broadcast to RGB slots).
inline void assign_slot(SurfaceValues& s, TextureSlot slot, const Texel& t, int channels) {
    auto rgb = [&](std::array<float, 3>& dst) {
        if (channels >= 3) dst = {t[0], t[1], t[2]};
        else dst = {t[0], t[0], t[0]};
    };
    switch (slot) {
        case TextureSlot::Albedo: rgb(s.albedo); break;
        case TextureSlot::Normal: rgb(s.normal); break;
        case TextureSlot::Roughness: s.roughness = t[0]; break;
        case TextureSlot::Metallic: s.metallic = t[0]; break;
        case TextureSlot::Occlusion: s.occlusion = t[0]; break;
    }
}

/// Unit tangent along +u for a triangle, falling back to any vector orthogonal to n.
inline Vec3 triangle_tangent(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec2& t0, const Vec2& t1,
                             const Vec2& t2, const Vec3& n) {
    const Vec3 e1 = p1 - p0, e2 = p2 - p0;
    const Vec2 d1 = t1 - t0, d2 = t2 - t0;
    const double det = d1.x * d2.y - d2.x * d1.y;
    Vec3 t;
    if (std::abs(det) > 1e-20) t = (e1 * d2.y - e2 * d1.y) / det;
    t = t - n * dot(n, t);
    if (length(t) < 1e-12) {
        const Vec3 ref = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        t = cross(ref, n);
    }
    return normalize(t);
}

namespace detail {

// Code k is the output for inputs in [threshold[k-1], threshold[k]); thresholds are the gamma
// 2.2 decodings of the half-way points between consecutive codes.
inline const std::array<float, 255>& encode_thresholds() {
    static const std::array<float, 255> table = [] {
        std::array<float, 255> t{};
        for (int k = 0; k < 255; ++k) t[k] = static_cast<float>(std::pow((k + 0.5) / 255.0, 2.2));
        return t;
    }();
    return table;
}

}  // namespace detail

/// Gamma 2.2 display encoding to 8 bits, rounding to the nearest code.
inline std::uint8_t encode_channel(float v) {
    const auto& t = detail::encode_thresholds();
    return static_cast<std::uint8_t>(std::upper_bound(t.begin(), t.end(), v) - t.begin());
}

/// Shades one surface sample. `normal` and `tangent` are the interpolated geometric frame,
/// `to_eye` points from the surface toward the viewer. Output is clamped into [0, 1] and
/// display-encoded to 8 bits.
inline Rgb8 shade(const SurfaceValues& s, const Vec3f& normal, const Vec3f& tangent, const Vec3f& to_eye,
                  const ShadingContext& ctx) {
    Vec3f n = normal;
    if (s.normal[0] != 0.5f || s.normal[1] != 0.5f || s.normal[2] != 1.0f) {
        const Vec3f t = normalize(tangent - n * dot(n, tangent));
        const Vec3f b = cross(n, t);
        const float nx = s.normal[0] * 2.0f - 1.0f, ny = s.normal[1] * 2.0f - 1.0f, nz = s.normal[2] * 2.0f - 1.0f;
        const Vec3f p = normalize(t * nx + b * ny + n * nz);
        if (length(p) > 0.5f) n = p;
    }
    const Vec3f l = Vec3f(ctx.light_direction);
    const Vec3f v = normalize(to_eye);
    const Vec3f albedo{s.albedo[0], s.albedo[1], s.albedo[2]};
    const float metallic = std::clamp(s.metallic, 0.0f, 1.0f);
    const float rough = std::clamp(s.roughness, 0.04f, 1.0f);
    const float alpha = rough * rough;

    Vec3f color = Vec3f(ctx.ambient);
    color = {color.x * albedo.x * s.occlusion, color.y * albedo.y * s.occlusion, color.z * albedo.z * s.occlusion};

    const float ndl = dot(n, l);
    const float ndv = std::max(dot(n, v), 1e-4f);
    if (ndl > 0.0f) {
        const Vec3f h = normalize(l + v);
        const float ndh = std::max(dot(n, h), 0.0f);
        const float vdh = std::max(dot(v, h), 0.0f);
        const float a2 = alpha * alpha;
        const float d_den = ndh * ndh * (a2 - 1.0f) + 1.0f;
        const float d = a2 / (std::numbers::pi_v<float> * d_den * d_den);
        const float k = alpha * 0.5f;
        const float g = (ndl / (ndl * (1.0f - k) + k)) * (ndv / (ndv * (1.0f - k) + k));
        const float c = 1.0f - vdh, c2 = c * c;
        const float fw = c2 * c2 * c;
        const Vec3f f0{0.04f + (albedo.x - 0.04f) * metallic, 0.04f + (albedo.y - 0.04f) * metallic,
                       0.04f + (albedo.z - 0.04f) * metallic};
        const Vec3f fresnel{f0.x + (1 - f0.x) * fw, f0.y + (1 - f0.y) * fw, f0.z + (1 - f0.z) * fw};
        const float spec = d * g / (4.0f * ndl * ndv);
        const float kd = (1.0f - metallic) / std::numbers::pi_v<float>;
        const Vec3f lc = Vec3f(ctx.light_color);
        color.x += ((1 - fresnel.x) * kd * albedo.x + fresnel.x * spec) * lc.x * ndl;
        color.y += ((1 - fresnel.y) * kd * albedo.y + fresnel.y * spec) * lc.y * ndl;
        color.z += ((1 - fresnel.z) * kd * albedo.z + fresnel.z * spec) * lc.z * ndl;
    }
    auto finite = [](float x) { return std::isfinite(x) ? x : 0.0f; };
    return {encode_channel(finite(color.x)), encode_channel(finite(color.y)), encode_channel(finite(color.z))};
}

}  // namespace lfdpr
