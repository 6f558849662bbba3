// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Per-frame point generation. Every visible triangle is laid out on a regular grid in its
// aligned sampling frame; grid spacing follows the reverse-projected view pixel (per axis,
// densest view), reduced when texels are coarser than pixels. Each point carries the
// multiview LOD band and texture values prefetched at both ends of it.

#pragma once

#include <lfdpr/error.hpp>
#include <lfdpr/lfd_model.hpp>
#include <lfdpr/math.hpp>
#include <lfdpr/mipmap.hpp>
#include <lfdpr/parallel.hpp>
#include <lfdpr/scene.hpp>
#include <lfdpr/shading.hpp>

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace lfdpr {

/// One splat. Fixed 80-byte layout; the aligned frame and texture ratio live in the
/// per-frame triangle table, indexed by `triangle`.
struct SplatPoint {
    std::array<float, 3> position;
    std::uint32_t triangle;        // owning triangle id; kInteriorBit set when the splat lies inside it
    std::array<float, 2> extents;  // half-size along the triangle's sampling axes, world units
    std::array<float, 2> uv;
    std::uint32_t normal;          // octahedral
    float vpuv_min;
    float vpuv_max;
    std::array<std::uint16_t, kSurfaceChannels> tv_min;  // unorm16
    std::array<std::uint16_t, kSurfaceChannels> tv_max;

    static constexpr std::uint32_t kInteriorBit = 1u << 31;

    Vec3 world() const { return {position[0], position[1], position[2]}; }
    std::uint32_t triangle_id() const { return triangle & ~kInteriorBit; }
    /// The splat rectangle lies entirely inside its triangle, so no view needs to clip it.
    bool interior() const { return (triangle & kInteriorBit) != 0; }
};

static_assert(sizeof(SplatPoint) == 80, "SplatPoint must stay at 80 bytes");

/// Per-frame, per-triangle data shared by point generation and splatting.
struct FrameTriangle {
    std::array<Vec3, 3> p;
    std::array<Vec2, 3> uv;
    std::array<Vec3, 3> n;
    Vec3 normal;    // geometric, unit; counter-clockwise winding faces it
    Vec3 centroid;
    Vec3 axis_x;    // sampling frame: projection of the display's horizontal onto the plane
    Vec3 axis_y;    // normal x axis_x
    Vec3 tangent;   // shading tangent along +u
    double world_area = 0;
    double texture_area = 0;
    std::uint32_t material = 0;

    /// Texture-space area per world-space area (proportional-isomorphism ratio).
    double texture_ratio() const { return world_area > 0 ? texture_area / world_area : 0.0; }
};

inline FrameTriangle make_frame_triangle(const TriangleMesh& mesh, std::size_t t) {
    const Triangle& tri = mesh.triangles[t];
    FrameTriangle f;
    for (int k = 0; k < 3; ++k) {
        f.p[k] = mesh.positions[tri.v[k]];
        f.uv[k] = mesh.uvs.empty() ? Vec2{} : mesh.uvs[tri.v[k]];
        f.n[k] = mesh.normals.empty() ? Vec3{} : mesh.normals[tri.v[k]];
    }
    const Vec3 c = cross(f.p[1] - f.p[0], f.p[2] - f.p[0]);
    f.world_area = 0.5 * length(c);
    f.normal = normalize(c);
    f.texture_area = triangle_area(f.uv[0], f.uv[1], f.uv[2]);
    f.centroid = (f.p[0] + f.p[1] + f.p[2]) / 3.0;
    for (auto& vn : f.n)
        if (length(vn) < 0.5) vn = f.normal;
    Vec3 x = Vec3{1, 0, 0} - f.normal * f.normal.x;
    if (length(x) < 1e-6) x = Vec3{0, 1, 0} - f.normal * f.normal.y;
    f.axis_x = normalize(x);
    f.axis_y = cross(f.normal, f.axis_x);
    f.tangent = triangle_tangent(f.p[0], f.p[1], f.p[2], f.uv[0], f.uv[1], f.uv[2], f.normal);
    f.material = tri.material;
    return f;
}

inline std::vector<FrameTriangle> build_triangle_table(const TriangleMesh& mesh, int workers = 1) {
    std::vector<FrameTriangle> table(mesh.triangles.size());
    constexpr std::size_t kChunk = 4096;
    parallel_for((table.size() + kChunk - 1) / kChunk, workers, [&](std::size_t c) {
        const std::size_t end = std::min(table.size(), (c + 1) * kChunk);
        for (std::size_t t = c * kChunk; t < end; ++t) table[t] = make_frame_triangle(mesh, t);
    });
    return table;
}

struct SamplingPlan {
    Vec3 origin;      // triangle centroid
    Vec3 axis_x, axis_y;
    Vec2 s_ortho;     // samples per world unit along axis_x, axis_y
    double size_xy = 0;
    double size_uv = 0;
};

// Linear frustum-plane values of p for one view; all >= 0 inside.
inline std::array<double, 6> frustum_planes(const ViewCamera& v, const Vec3& p) {
    const double d = v.view_depth(p);
    const double lx = v.ox * d + (p.x - v.eye.x) * v.sx;
    const double ly = v.oy * d - (p.y - v.eye.y) * v.sy;
    return {lx, v.width * d - lx, ly, v.height * d - ly, d - v.near, v.far - d};
}

inline bool front_facing(const FrameTriangle& t, const Vec3& eye) { return dot(t.normal, eye - t.p[0]) > 0; }

/// True iff some view both sees the front face and has the triangle not entirely outside one
/// of its frustum planes.
inline bool cull_triangle(const FrameTriangle& t, std::span<const ViewCamera> views) {
    for (const auto& v : views) {
        if (!front_facing(t, v.eye)) continue;
        const auto a = frustum_planes(v, t.p[0]);
        const auto b = frustum_planes(v, t.p[1]);
        const auto c = frustum_planes(v, t.p[2]);
        bool outside = false;
        for (int k = 0; k < 6 && !outside; ++k) outside = a[k] < 0 && b[k] < 0 && c[k] < 0;
        if (!outside) return true;
    }
    return false;
}

/// Closest point on triangle abc to p.
inline Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0 && d2 <= 0) return a;
    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0 && d4 <= d3) return b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));
    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0 && d5 <= d6) return c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

struct EdgeDensity {
    Vec2 s_ortho;           // max over views of 1 / edge length, per axis
    double size_xy = 0;     // min over views of l_h * l_v
    double area_max = 0;    // max over views of l_h * l_v
    int views_used = 0;
};

/// Reverse-projects one pixel's horizontal and vertical edges, centred on the point of the
/// triangle closest to each eye, onto the triangle's plane.
inline EdgeDensity pixel_edge_density(const FrameTriangle& t, std::span<const ViewCamera> views) {
    EdgeDensity out;
    out.size_xy = std::numeric_limits<double>::infinity();
    auto hit = [&](const ViewCamera& v, double px, double py, Vec3& where) {
        const Vec3 dir = v.pixel_ray(px, py);
        const double den = dot(t.normal, dir);
        if (std::abs(den) < 1e-300) return false;
        const double s = dot(t.normal, t.p[0] - v.eye) / den;
        if (!(s > 0) || !std::isfinite(s)) return false;
        where = v.eye + dir * s;
        return true;
    };
    for (const auto& v : views) {
        if (!front_facing(t, v.eye)) continue;
        const Vec3 q = closest_point_on_triangle(v.eye, t.p[0], t.p[1], t.p[2]);
        const ScreenPoint sp = v.project(q);
        if (!(sp.depth > 0)) continue;
        Vec3 h0, h1, v0, v1;
        if (!hit(v, sp.x - 0.5, sp.y, h0) || !hit(v, sp.x + 0.5, sp.y, h1) || !hit(v, sp.x, sp.y - 0.5, v0) ||
            !hit(v, sp.x, sp.y + 0.5, v1))
            continue;
        const double lh = length(h1 - h0), lv = length(v1 - v0);
        if (!(lh > 0) || !(lv > 0) || !std::isfinite(lh) || !std::isfinite(lv)) continue;
        out.s_ortho.x = std::max(out.s_ortho.x, 1.0 / lh);
        out.s_ortho.y = std::max(out.s_ortho.y, 1.0 / lv);
        out.size_xy = std::min(out.size_xy, lh * lv);
        out.area_max = std::max(out.area_max, lh * lv);
        ++out.views_used;
    }
    if (out.views_used == 0) out.size_xy = 0;
    return out;
}

struct TexelDensity {
    double n_tex = 0;
    double size_uv = 0;  // 0 disables density reduction
    bool zero_texture_area = false;
};

inline TexelDensity texel_density(const FrameTriangle& t, const Material& m, std::span<const MipPyramid> textures) {
    TexelDensity d;
    for (int s = 0; s < kTextureSlots; ++s) {
        const int id = m.textures[s];
        if (id < 0) continue;
        const auto& tex = textures[static_cast<std::size_t>(id)];
        d.n_tex = std::max(d.n_tex, t.texture_area * tex.width() * tex.height());
    }
    if (d.n_tex > 0 && t.world_area > 0) d.size_uv = t.world_area / d.n_tex;
    else if (m.textured()) d.zero_texture_area = true;
    return d;
}

inline Vec2 adjust_density(Vec2 s_ortho, double size_xy, double size_uv) {
    if (size_uv > size_xy && size_xy > 0) return s_ortho * std::sqrt(size_xy / size_uv);
    return s_ortho;
}

struct LodBand {
    double vpuv_min = 0;
    double vpuv_max = 0;
    std::array<double, kTextureSlots> lod_min{};
    std::array<double, kTextureSlots> lod_max{};
};

inline double texture_lod(double vpuv, const MipPyramid& tex) {
    const double x = vpuv * tex.width() * tex.height();
    const double lod = x > 0 ? 0.5 * std::log2(x) : 0.0;
    return std::clamp(lod, 0.0, static_cast<double>(tex.level_count() - 1));
}

/// LOD band from the per-view pixel areas on the triangle (min/max over views of
/// size_xy^v) scaled into texture space.
inline LodBand lod_band(const FrameTriangle& t, const EdgeDensity& density, const Material& m,
                        std::span<const MipPyramid> textures) {
    LodBand b;
    const double r = t.texture_ratio();
    b.vpuv_min = density.size_xy * r;
    b.vpuv_max = density.area_max * r;
    if (b.vpuv_max < b.vpuv_min) b.vpuv_max = b.vpuv_min;
    for (int s = 0; s < kTextureSlots; ++s) {
        const int id = m.textures[s];
        if (id < 0) continue;
        const auto& tex = textures[static_cast<std::size_t>(id)];
        b.lod_min[s] = texture_lod(b.vpuv_min, tex);
        b.lod_max[s] = texture_lod(b.vpuv_max, tex);
    }
    return b;
}

inline SamplingPlan make_sampling_plan(const FrameTriangle& t, const EdgeDensity& e, const TexelDensity& d) {
    SamplingPlan p;
    p.origin = t.centroid;
    p.axis_x = t.axis_x;
    p.axis_y = t.axis_y;
    p.size_xy = e.size_xy;
    p.size_uv = d.size_uv;
    p.s_ortho = adjust_density(e.s_ortho, e.size_xy, d.size_uv);
    return p;
}

struct EmitOptions {
    bool mipmapping = true;                // false: point samples at the finest level only
    std::size_t max_cells = 1u << 20;      // per-triangle cap on grid cells
};

namespace detail {

// 2D separating-axis overlap test between an axis-aligned cell and a triangle, requiring
// positive-area intersection.
inline bool cell_overlaps(const std::array<Vec2, 3>& tri, double x0, double y0, double x1, double y1) {
    double tx0 = tri[0].x, tx1 = tri[0].x, ty0 = tri[0].y, ty1 = tri[0].y;
    for (int k = 1; k < 3; ++k) {
        tx0 = std::min(tx0, tri[k].x);
        tx1 = std::max(tx1, tri[k].x);
        ty0 = std::min(ty0, tri[k].y);
        ty1 = std::max(ty1, tri[k].y);
    }
    if (tx1 <= x0 || tx0 >= x1 || ty1 <= y0 || ty0 >= y1) return false;
    const double orient = cross(tri[1] - tri[0], tri[2] - tri[0]) > 0 ? 1.0 : -1.0;
    const std::array<Vec2, 4> corners{Vec2{x0, y0}, Vec2{x1, y0}, Vec2{x1, y1}, Vec2{x0, y1}};
    const double eps = 1e-12 * std::max(x1 - x0, y1 - y0) * std::max(x1 - x0, y1 - y0);
    for (int k = 0; k < 3; ++k) {
        const Vec2 a = tri[k], b = tri[(k + 1) % 3];
        bool any_inside = false;
        for (const Vec2& c : corners)
            if (orient * cross(b - a, c - a) > eps) {
                any_inside = true;
                break;
            }
        if (!any_inside) return false;
    }
    return true;
}

/// Closed inside test (points on an edge count as inside).
inline bool inside_triangle(const std::array<Vec2, 3>& tri, Vec2 q) {
    const double orient = cross(tri[1] - tri[0], tri[2] - tri[0]) > 0 ? 1.0 : -1.0;
    for (int k = 0; k < 3; ++k)
        if (orient * cross(tri[(k + 1) % 3] - tri[k], q - tri[k]) < 0) return false;
    return true;
}

inline Vec3 clamped_barycentric(const std::array<Vec2, 3>& tri, Vec2 q) {
    const double den = cross(tri[1] - tri[0], tri[2] - tri[0]);
    double b1 = cross(q - tri[0], tri[2] - tri[0]) / den;
    double b2 = cross(tri[1] - tri[0], q - tri[0]) / den;
    double b0 = 1.0 - b1 - b2;
    b0 = std::max(b0, 0.0);
    b1 = std::max(b1, 0.0);
    b2 = std::max(b2, 0.0);
    const double s = b0 + b1 + b2;
    return {b0 / s, b1 / s, b2 / s};
}

}  // namespace detail

/// Texture values at `uv` for both ends of the band, or the material scalars when untextured.
inline void prefetch_band(const Material& m, std::span<const MipPyramid> textures, Vec2 uv, const LodBand& band,
                          bool mipmapping, SurfaceValues& lo, SurfaceValues& hi) {
    lo = hi = material_defaults(m);
    for (int s = 0; s < kTextureSlots; ++s) {
        const int id = m.textures[s];
        if (id < 0) continue;
        const auto& tex = textures[static_cast<std::size_t>(id)];
        const auto slot = static_cast<TextureSlot>(s);
        if (!mipmapping) {
            const Texel v = tex.sample_trilinear(uv, 0.0);
            assign_slot(lo, slot, v, tex.channels());
            assign_slot(hi, slot, v, tex.channels());
            continue;
        }
        assign_slot(lo, slot, tex.sample_trilinear(uv, band.lod_min[s]), tex.channels());
        if (band.lod_max[s] == band.lod_min[s]) assign_slot(hi, slot, tex.sample_trilinear(uv, band.lod_min[s]), tex.channels());
        else assign_slot(hi, slot, tex.sample_trilinear(uv, band.lod_max[s]), tex.channels());
    }
}

/// Lays the triangle out on the plan's grid in its sampling frame and emits one point per grid
/// cell that overlaps the triangle. A triangle no larger than one cell emits one point at its
/// centroid.
inline std::size_t emit_points(const FrameTriangle& t, std::uint32_t triangle_id, const SamplingPlan& plan,
                               const LodBand& band, const Material& m, std::span<const MipPyramid> textures,
                               const EmitOptions& options, std::vector<SplatPoint>& out) {
    if (!(plan.s_ortho.x > 0) || !(plan.s_ortho.y > 0)) return 0;
    std::array<Vec2, 3> q;
    for (int k = 0; k < 3; ++k) {
        const Vec3 d = t.p[k] - plan.origin;
        q[k] = {dot(d, plan.axis_x), dot(d, plan.axis_y)};
    }
    const double bx0 = std::min({q[0].x, q[1].x, q[2].x}), x1 = std::max({q[0].x, q[1].x, q[2].x});
    const double by0 = std::min({q[0].y, q[1].y, q[2].y}), y1 = std::max({q[0].y, q[1].y, q[2].y});
    double dx = 1.0 / plan.s_ortho.x, dy = 1.0 / plan.s_ortho.y;
    {
        const double k = std::ceil((x1 - bx0) / dx - 1e-9) * std::ceil((y1 - by0) / dy - 1e-9);
        if (k > static_cast<double>(options.max_cells)) {
            dx *= std::sqrt(k / static_cast<double>(options.max_cells));
            dy *= std::sqrt(k / static_cast<double>(options.max_cells));
        }
    }
    // Cells sit on a lattice anchored at the world origin's projection into the plane, so
    // coplanar neighbours with equal spacing share cell boundaries.
    const double ox = dot(plan.origin, plan.axis_x), oy = dot(plan.origin, plan.axis_y);
    const double x0 = std::floor((bx0 + ox) / dx) * dx - ox, y0 = std::floor((by0 + oy) / dy) * dy - oy;
    const int nx = static_cast<int>(std::max(1.0, std::ceil((x1 - x0) / dx - 1e-9)));
    const int ny = static_cast<int>(std::max(1.0, std::ceil((y1 - y0) / dy - 1e-9)));

    auto push = [&](Vec2 c, double ex, double ey, bool interior) {
        const Vec3 b = detail::clamped_barycentric(q, c);
        const Vec3 pos = plan.origin + plan.axis_x * c.x + plan.axis_y * c.y;
        const Vec2 uv = t.uv[0] * b.x + t.uv[1] * b.y + t.uv[2] * b.z;
        Vec3 n = normalize(t.n[0] * b.x + t.n[1] * b.y + t.n[2] * b.z);
        if (length(n) < 0.5) n = t.normal;
        SurfaceValues lo, hi;
        prefetch_band(m, textures, uv, band, options.mipmapping, lo, hi);
        const SurfaceChannels clo = flatten(lo), chi = flatten(hi);
        SplatPoint p{};
        p.position = {static_cast<float>(pos.x), static_cast<float>(pos.y), static_cast<float>(pos.z)};
        p.triangle = triangle_id | (interior ? SplatPoint::kInteriorBit : 0u);
        p.extents = {static_cast<float>(ex), static_cast<float>(ey)};
        p.uv = {static_cast<float>(uv.x), static_cast<float>(uv.y)};
        p.normal = encode_octahedral(n);
        p.vpuv_min = static_cast<float>(band.vpuv_min);
        p.vpuv_max = std::max(p.vpuv_min, static_cast<float>(band.vpuv_max));
        for (int k = 0; k < kSurfaceChannels; ++k) {
            p.tv_min[k] = to_unorm16(clo[k]);
            p.tv_max[k] = to_unorm16(chi[k]);
        }
        out.push_back(p);
    };

    if ((nx == 1 && ny == 1) || (x1 - bx0 <= dx && y1 - by0 <= dy)) {
        // Centroid point; the splat grows to cover the whole triangle.
        const double ex = std::max({0.5 * dx, -bx0, x1}), ey = std::max({0.5 * dy, -by0, y1});
        push({0.0, 0.0}, ex, ey, false);
        return 1;
    }
    std::size_t emitted = 0;
    for (int j = 0; j < ny; ++j) {
        const double cy0 = y0 + j * dy, cy1 = cy0 + dy;
        for (int i = 0; i < nx; ++i) {
            const double cx0 = x0 + i * dx, cx1 = cx0 + dx;
            if (!detail::cell_overlaps(q, cx0, cy0, cx1, cy1)) continue;
            const bool interior = detail::inside_triangle(q, {cx0, cy0}) && detail::inside_triangle(q, {cx1, cy0}) &&
                                  detail::inside_triangle(q, {cx1, cy1}) && detail::inside_triangle(q, {cx0, cy1});
            push({0.5 * (cx0 + cx1), 0.5 * (cy0 + cy1)}, 0.5 * dx, 0.5 * dy, interior);
            ++emitted;
        }
    }
    return emitted;
}

struct PointGenStats {
    std::uint64_t triangle_stage = 0;   // triangles entering the geometry stage
    std::uint64_t triangles_culled = 0;
    std::uint64_t points = 0;
    std::uint64_t density_reduced = 0;  // triangles where texel density lowered the grid
    std::uint64_t zero_texture_area = 0;
    std::array<std::uint64_t, 17> histogram{};  // bucket b: points in [2^(b-1), 2^b), bucket 0 = none
    double seconds = 0;

    static int bucket(std::size_t n) {
        if (n == 0) return 0;
        return std::min(16, static_cast<int>(std::bit_width(n)));
    }
};

struct PointCloud {
    std::vector<SplatPoint> points;
    std::vector<FrameTriangle> triangles;
};

/// Runs the geometry stage once per triangle against the whole view set.
inline PointCloud generate_points(const TriangleMesh& mesh, std::span<const Material> materials,
                                  std::span<const MipPyramid> textures, std::span<const ViewCamera> views,
                                  const EmitOptions& options, int workers, PointGenStats* stats = nullptr) {
    const auto start = std::chrono::steady_clock::now();
    if (views.empty()) throw Error(ErrorKind::InvalidConfig, "point generation needs at least one view");
    for (const auto& tri : mesh.triangles)
        if (tri.material >= materials.size())
            throw Error(ErrorKind::IndexOutOfRange, "triangle references a missing material");
    PointCloud cloud;
    cloud.triangles = build_triangle_table(mesh, workers);

    constexpr std::size_t kChunk = 1024;
    const std::size_t n = cloud.triangles.size();
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<SplatPoint>> parts(chunks);
    std::vector<PointGenStats> part_stats(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
        PointGenStats& st = part_stats[c];
        auto& out = parts[c];
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            const FrameTriangle& t = cloud.triangles[i];
            ++st.triangle_stage;
            if (!(t.world_area > 0) || !cull_triangle(t, views)) {
                ++st.triangles_culled;
                continue;
            }
            const Material& m = materials[t.material];
            const EdgeDensity e = pixel_edge_density(t, views);
            if (e.views_used == 0) {
                ++st.triangles_culled;
                continue;
            }
            const TexelDensity d = texel_density(t, m, textures);
            if (d.zero_texture_area) ++st.zero_texture_area;
            const SamplingPlan plan = make_sampling_plan(t, e, d);
            if (plan.s_ortho.x < e.s_ortho.x) ++st.density_reduced;
            const LodBand band = lod_band(t, e, m, textures);
            const std::size_t k = emit_points(t, static_cast<std::uint32_t>(i), plan, band, m, textures, options, out);
            st.points += k;
            ++st.histogram[PointGenStats::bucket(k)];
        }
    });
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    cloud.points.reserve(total);
    for (auto& p : parts) cloud.points.insert(cloud.points.end(), p.begin(), p.end());

    if (stats) {
        PointGenStats s;
        for (const auto& st : part_stats) {
            s.triangle_stage += st.triangle_stage;
            s.triangles_culled += st.triangles_culled;
            s.points += st.points;
            s.density_reduced += st.density_reduced;
            s.zero_texture_area += st.zero_texture_area;
            for (std::size_t b = 0; b < s.histogram.size(); ++b) s.histogram[b] += st.histogram[b];
        }
        s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        *stats = s;
    }
    return cloud;
}

}  // namespace lfdpr
