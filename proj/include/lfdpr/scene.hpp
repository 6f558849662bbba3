// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Scene loading (Wavefront OBJ + MTL + PNG textures), oversized-triangle tessellation and
// rigid per-frame animation.
//
// MTL slots map onto the PBR texture set as follows:
//   map_Kd -> albedo, map_Bump / bump / norm -> normal (tangent space), map_Pr -> roughness,
//   map_Pm -> metallic, map_ao / map_Ka -> ambient occlusion.
// Scalar fallbacks: Kd, Pr, Pm; ambient occlusion defaults to 1 and the normal map to +z.

#pragma once

#include <lfdpr/error.hpp>
#include <lfdpr/image.hpp>
#include <lfdpr/lfd_model.hpp>
#include <lfdpr/math.hpp>
#include <lfdpr/mipmap.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace lfdpr {

enum class TextureSlot : int { Albedo = 0, Normal = 1, Roughness = 2, Metallic = 3, Occlusion = 4 };
inline constexpr int kTextureSlots = 5;

struct Material {
    std::string name;
    std::array<int, kTextureSlots> textures{-1, -1, -1, -1, -1};  // index into Scene::textures
    Vec3 albedo{0.8, 0.8, 0.8};
    double roughness = 0.5;
    double metallic = 0.0;
    double occlusion = 1.0;

    int texture(TextureSlot s) const { return textures[static_cast<int>(s)]; }
    bool textured() const {
        for (int t : textures)
            if (t >= 0) return true;
        return false;
    }
};

struct Triangle {
    std::array<std::uint32_t, 3> v{};
    std::uint32_t material = 0;
};

struct TriangleMesh {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;  // unit, one per vertex
    std::vector<Vec2> uvs;      // one per vertex; v grows downward in the image
    std::vector<Triangle> triangles;

    std::size_t vertex_count() const { return positions.size(); }

    double world_area(std::size_t t) const {
        const auto& v = triangles[t].v;
        return triangle_area(positions[v[0]], positions[v[1]], positions[v[2]]);
    }
    double texture_area(std::size_t t) const {
        const auto& v = triangles[t].v;
        return triangle_area(uvs[v[0]], uvs[v[1]], uvs[v[2]]);
    }

    struct Bounds { Vec3 min, max; };
    Bounds bounds() const {
        Bounds b{{1e300, 1e300, 1e300}, {-1e300, -1e300, -1e300}};
        for (const auto& p : positions) {
            b.min = {std::min(b.min.x, p.x), std::min(b.min.y, p.y), std::min(b.min.z, p.z)};
            b.max = {std::max(b.max.x, p.x), std::max(b.max.y, p.y), std::max(b.max.z, p.z)};
        }
        return b;
    }
};

struct LoadReport {
    std::size_t degenerate_dropped = 0;
    std::vector<std::string> warnings;
};

struct Scene {
    TriangleMesh mesh;
    std::vector<Material> materials;
    std::vector<MipPyramid> textures;
    LoadReport report;
};

struct LoadOptions {
    bool load_textures = true;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& tok, const std::string& where) {
    double v = 0;
    try {
        std::size_t used = 0;
        v = std::stod(tok, &used);
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::MalformedInput, "malformed number '" + tok + "' in " + where);
    }
    if (!std::isfinite(v)) throw Error(ErrorKind::MalformedInput, "non-finite coordinate in " + where);
    return v;
}

inline int texture_slot_of(const std::string& key) {
    if (key == "map_Kd") return static_cast<int>(TextureSlot::Albedo);
    if (key == "map_Bump" || key == "map_bump" || key == "bump" || key == "norm")
        return static_cast<int>(TextureSlot::Normal);
    if (key == "map_Pr") return static_cast<int>(TextureSlot::Roughness);
    if (key == "map_Pm") return static_cast<int>(TextureSlot::Metallic);
    if (key == "map_ao" || key == "map_Ka") return static_cast<int>(TextureSlot::Occlusion);
    return -1;
}

inline void load_mtl(const std::filesystem::path& path, Scene& scene, std::map<std::string, std::uint32_t>& by_name,
                     const LoadOptions& options, std::map<std::string, int>& texture_cache) {
    std::ifstream in(path);
    if (!in) {
        scene.report.warnings.push_back("material library not found: " + path.string() + " (using defaults)");
        return;
    }
    std::optional<std::size_t> current_index;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "newmtl") {
            Material m;
            ls >> m.name;
            by_name[m.name] = static_cast<std::uint32_t>(scene.materials.size());
            current_index = scene.materials.size();
            scene.materials.push_back(m);
            continue;
        }
        if (!current_index) continue;
        Material* current = &scene.materials[*current_index];
        if (key == "Kd") {
            std::string a, b, c;
            ls >> a >> b >> c;
            current->albedo = {parse_real(a, path.string()), parse_real(b, path.string()), parse_real(c, path.string())};
        } else if (key == "Pr") {
            std::string a;
            ls >> a;
            current->roughness = parse_real(a, path.string());
        } else if (key == "Pm") {
            std::string a;
            ls >> a;
            current->metallic = parse_real(a, path.string());
        } else if (const int slot = texture_slot_of(key); slot >= 0) {
            // The file name is the last token; options such as -bm are skipped.
            std::string tok, file;
            while (ls >> tok) file = tok;
            if (file.empty()) continue;
            const auto tex_path = (path.parent_path() / file).lexically_normal();
            if (!options.load_textures) continue;
            if (auto it = texture_cache.find(tex_path.string()); it != texture_cache.end()) {
                current->textures[slot] = it->second;
                continue;
            }
            if (!std::filesystem::exists(tex_path)) {
                scene.report.warnings.push_back("texture missing, using scalar fallback: " + tex_path.string());
                continue;
            }
            ImageF img = to_float(read_png(tex_path));
            if (img.channels == 2 || img.channels == 4) {
                // Drop alpha; the shading model is opaque.
                ImageF rgb(img.width, img.height, img.channels - 1);
                for (int y = 0; y < img.height; ++y)
                    for (int x = 0; x < img.width; ++x)
                        for (int c = 0; c < rgb.channels; ++c) rgb.at(x, y, c) = img.at(x, y, c);
                img = std::move(rgb);
            }
            const int index = static_cast<int>(scene.textures.size());
            scene.textures.emplace_back(std::move(img));
            texture_cache[tex_path.string()] = index;
            current->textures[slot] = index;
        }
    }
}

struct VertexKey {
    long long p, t, n;
    bool operator==(const VertexKey&) const = default;
};
struct VertexKeyHash {
    std::size_t operator()(const VertexKey& k) const {
        return std::hash<long long>()(k.p * 73856093LL ^ k.t * 19349663LL ^ k.n * 83492791LL);
    }
};

}  // namespace detail

/// Loads an OBJ (+ MTL + PNG textures). Zero-area triangles are dropped and counted; missing
/// textures fall back to material scalars with a warning.
inline Scene load_scene(const std::filesystem::path& path, const LoadOptions& options = {}) {
    using detail::parse_real;
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::FileNotFound, "scene not found: " + path.string());

    Scene scene;
    std::vector<Vec3> pos;
    std::vector<Vec2> tex;
    std::vector<Vec3> nrm;
    std::map<std::string, std::uint32_t> material_ids;
    std::map<std::string, int> texture_cache;
    std::unordered_map<detail::VertexKey, std::uint32_t, detail::VertexKeyHash> vertex_ids;
    std::uint32_t current_material = 0;
    bool have_default_material = false;
    auto default_material = [&]() -> std::uint32_t {
        if (!have_default_material) {
            Material m;
            m.name = "__default__";
            material_ids[m.name] = static_cast<std::uint32_t>(scene.materials.size());
            scene.materials.push_back(m);
            have_default_material = true;
        }
        return material_ids["__default__"];
    };
    bool material_set = false;

    struct Corner { long long p, t, n; };
    std::vector<std::array<Corner, 3>> faces;
    std::vector<std::uint32_t> face_materials;

    std::string line;
    int line_no = 0;
    const std::string where = path.string();
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        const std::string at = where + ":" + std::to_string(line_no);
        if (key == "v") {
            std::string a, b, c;
            ls >> a >> b >> c;
            pos.push_back({parse_real(a, at), parse_real(b, at), parse_real(c, at)});
        } else if (key == "vt") {
            std::string a, b;
            ls >> a >> b;
            tex.push_back({parse_real(a, at), 1.0 - (b.empty() ? 0.0 : parse_real(b, at))});
        } else if (key == "vn") {
            std::string a, b, c;
            ls >> a >> b >> c;
            nrm.push_back({parse_real(a, at), parse_real(b, at), parse_real(c, at)});
        } else if (key == "mtllib") {
            std::string file;
            ls >> file;
            detail::load_mtl(path.parent_path() / file, scene, material_ids, options, texture_cache);
        } else if (key == "usemtl") {
            std::string name;
            ls >> name;
            if (auto it = material_ids.find(name); it != material_ids.end()) {
                current_material = it->second;
            } else {
                scene.report.warnings.push_back("unknown material '" + name + "', using default");
                current_material = default_material();
            }
            material_set = true;
        } else if (key == "f") {
            std::vector<Corner> poly;
            std::string tok;
            while (ls >> tok) {
                Corner c{-1, -1, -1};
                long long* slots[3] = {&c.p, &c.t, &c.n};
                std::size_t start = 0;
                for (int k = 0; k < 3 && start <= tok.size(); ++k) {
                    const auto slash = tok.find('/', start);
                    const std::string part = tok.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
                    if (!part.empty()) {
                        long long idx = 0;
                        try {
                            idx = std::stoll(part);
                        } catch (const std::logic_error&) {
                            throw Error(ErrorKind::MalformedInput, "bad face index at " + at);
                        }
                        const long long count = k == 0 ? static_cast<long long>(pos.size())
                                                : k == 1 ? static_cast<long long>(tex.size())
                                                         : static_cast<long long>(nrm.size());
                        const long long resolved = idx < 0 ? count + idx : idx - 1;
                        if (resolved < 0 || resolved >= count)
                            throw Error(ErrorKind::IndexOutOfRange, "face index out of range at " + at);
                        *slots[k] = resolved;
                    }
                    if (slash == std::string::npos) break;
                    start = slash + 1;
                }
                if (c.p < 0) throw Error(ErrorKind::MalformedInput, "face without position index at " + at);
                poly.push_back(c);
            }
            if (poly.size() < 3) throw Error(ErrorKind::MalformedInput, "face with fewer than 3 vertices at " + at);
            if (!material_set) {
                current_material = default_material();
                material_set = true;
            }
            for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
                faces.push_back({poly[0], poly[k], poly[k + 1]});
                face_materials.push_back(current_material);
            }
        }
    }
    if (scene.materials.empty()) default_material();

    // Scale-aware degeneracy threshold.
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const auto& p : pos) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const double diag = pos.empty() ? 1.0 : length(hi - lo);
    const double min_area = 1e-14 * diag * diag;

    TriangleMesh& mesh = scene.mesh;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& face = faces[f];
        const Vec3& a = pos[face[0].p];
        const Vec3& b = pos[face[1].p];
        const Vec3& c = pos[face[2].p];
        const Vec3 fn = cross(b - a, c - a);
        if (!(0.5 * length(fn) > min_area)) {
            ++scene.report.degenerate_dropped;
            continue;
        }
        const Vec3 face_normal = normalize(fn);
        Triangle tri;
        tri.material = face_materials[f];
        for (int k = 0; k < 3; ++k) {
            const auto& cn = face[k];
            // Faces without normals get per-face vertices (key n = -2 - face) so flat normals stay flat.
            const detail::VertexKey key{cn.p, cn.t, cn.n >= 0 ? cn.n : -2 - static_cast<long long>(f)};
            auto it = vertex_ids.find(key);
            if (it == vertex_ids.end()) {
                const auto id = static_cast<std::uint32_t>(mesh.positions.size());
                mesh.positions.push_back(pos[cn.p]);
                Vec3 n = cn.n >= 0 ? normalize(nrm[cn.n]) : face_normal;
                if (length(n) < 0.5) n = face_normal;
                mesh.normals.push_back(n);
                mesh.uvs.push_back(cn.t >= 0 ? tex[cn.t] : Vec2{0, 0});
                it = vertex_ids.emplace(key, id).first;
            }
            tri.v[k] = it->second;
        }
        mesh.triangles.push_back(tri);
    }
    return scene;
}

/// Rigid rotation about a pivot, advanced by a fixed angle per frame.
struct SceneAnimation {
    Vec3 axis{0, 1, 0};
    double rate = 0.0;  // radians per frame
    Vec3 pivot{0, 0, 0};
};

/// World-space mesh for `frame_index`: rotation by frame_index * rate about the pivot.
inline TriangleMesh advance_frame(const TriangleMesh& mesh, const SceneAnimation& anim, long long frame_index) {
    if (frame_index < 0) throw Error(ErrorKind::InvalidConfig, "frame index must be non-negative");
    TriangleMesh out = mesh;
    const double angle = anim.rate * static_cast<double>(frame_index);
    if (angle == 0.0) return out;
    const Vec3 axis = normalize(anim.axis);
    for (auto& p : out.positions) p = anim.pivot + rotate(p - anim.pivot, axis, angle);
    for (auto& n : out.normals) n = normalize(rotate(n, axis, angle));
    return out;
}

/// Screen-space area (pixels) of the part of a triangle inside the viewport of one view.
/// Triangles crossing the near plane report +inf; triangles entirely behind it report 0.
inline double projected_area(const ViewCamera& view, const Vec3& a, const Vec3& b, const Vec3& c) {
    const double da = view.view_depth(a), db = view.view_depth(b), dc = view.view_depth(c);
    if (da <= view.near && db <= view.near && dc <= view.near) return 0.0;
    if (da <= view.near || db <= view.near || dc <= view.near) return std::numeric_limits<double>::infinity();
    const ScreenPoint pa = view.project(a), pb = view.project(b), pc = view.project(c);
    std::vector<Vec2> poly{{pa.x, pa.y}, {pb.x, pb.y}, {pc.x, pc.y}};
    // Sutherland-Hodgman against the viewport rectangle.
    auto clip = [&](auto inside, auto intersect) {
        std::vector<Vec2> out;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2& p = poly[i];
            const Vec2& q = poly[(i + 1) % poly.size()];
            const bool ip = inside(p), iq = inside(q);
            if (ip) out.push_back(p);
            if (ip != iq) out.push_back(intersect(p, q));
        }
        poly = std::move(out);
    };
    const double w = view.width, h = view.height;
    clip([](Vec2 p) { return p.x >= 0; }, [](Vec2 p, Vec2 q) { return lerp(p, q, (0 - p.x) / (q.x - p.x)); });
    clip([w](Vec2 p) { return p.x <= w; }, [w](Vec2 p, Vec2 q) { return lerp(p, q, (w - p.x) / (q.x - p.x)); });
    clip([](Vec2 p) { return p.y >= 0; }, [](Vec2 p, Vec2 q) { return lerp(p, q, (0 - p.y) / (q.y - p.y)); });
    clip([h](Vec2 p) { return p.y <= h; }, [h](Vec2 p, Vec2 q) { return lerp(p, q, (h - p.y) / (q.y - p.y)); });
    double area = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) area += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * std::abs(area);
}

inline double max_projected_area(std::span<const ViewCamera> views, const Vec3& a, const Vec3& b, const Vec3& c) {
    double m = 0;
    for (const auto& v : views) m = std::max(m, projected_area(v, a, b, c));
    return m;
}

/// Longest-edge bisection until every triangle projects to at most `max_pixels` in every view.
/// Midpoint vertices are shared per edge; children partition their parent exactly.
inline TriangleMesh tessellate(const TriangleMesh& mesh, std::span<const ViewCamera> views, double max_pixels,
                               int max_depth = 24) {
    if (!(max_pixels > 0)) throw Error(ErrorKind::InvalidConfig, "max_pixels must be positive");
    if (views.empty()) throw Error(ErrorKind::InvalidConfig, "tessellation needs at least one view");
    if (std::isinf(max_pixels)) return mesh;

    TriangleMesh out;
    out.positions = mesh.positions;
    out.normals = mesh.normals;
    out.uvs = mesh.uvs;
    out.triangles.reserve(mesh.triangles.size());
    std::unordered_map<std::uint64_t, std::uint32_t> midpoints;

    auto midpoint = [&](std::uint32_t i, std::uint32_t j) {
        const std::uint64_t key = (static_cast<std::uint64_t>(std::min(i, j)) << 32) | std::max(i, j);
        if (auto it = midpoints.find(key); it != midpoints.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(out.positions.size());
        const std::uint32_t lo = std::min(i, j), hi = std::max(i, j);
        out.positions.push_back((out.positions[lo] + out.positions[hi]) * 0.5);
        out.normals.push_back(normalize(out.normals[lo] + out.normals[hi]));
        if (length(out.normals.back()) < 0.5) out.normals.back() = out.normals[lo];
        out.uvs.push_back((out.uvs[lo] + out.uvs[hi]) * 0.5);
        midpoints.emplace(key, id);
        return id;
    };

    struct Item { Triangle tri; int depth; };
    std::vector<Item> stack;
    for (const auto& root : mesh.triangles) {
        stack.push_back({root, 0});
        while (!stack.empty()) {
            const Item item = stack.back();
            stack.pop_back();
            const auto& v = item.tri.v;
            const Vec3& a = out.positions[v[0]];
            const Vec3& b = out.positions[v[1]];
            const Vec3& c = out.positions[v[2]];
            if (item.depth >= max_depth || max_projected_area(views, a, b, c) <= max_pixels) {
                out.triangles.push_back(item.tri);
                continue;
            }
            const double l0 = dot(b - a, b - a), l1 = dot(c - b, c - b), l2 = dot(a - c, a - c);
            const int e = (l0 >= l1 && l0 >= l2) ? 0 : (l1 >= l2 ? 1 : 2);
            const std::uint32_t i0 = v[e], i1 = v[(e + 1) % 3], i2 = v[(e + 2) % 3];
            const std::uint32_t m = midpoint(i0, i1);
            Triangle t1 = item.tri, t2 = item.tri;
            t1.v = {i0, m, i2};
            t2.v = {m, i1, i2};
            // Second child is pushed first so children are emitted in (t1, t2) order.
            stack.push_back({t2, item.depth + 1});
            stack.push_back({t1, item.depth + 1});
        }
    }
    return out;
}

/// Framing and animation sidecar (`<scene>.scene`, key = value). Absent keys are derived
/// from the mesh bounds.
struct SceneSettings {
    std::optional<Vec3> focal_center;
    std::optional<double> focal_width;
    std::optional<double> focal_height;
    SceneAnimation animation{{0, 1, 0}, 2.0 * std::numbers::pi / 1000.0, {0, 0, 0}};
    bool pivot_set = false;
    double max_pixels = 100.0;
    Vec3 light_direction{-0.4, 0.8, 0.45};  // toward the light
    Vec3 light_color{2.6, 2.5, 2.3};
    Vec3 ambient{0.25, 0.25, 0.28};
};

inline SceneSettings load_scene_settings(const std::filesystem::path& path) {
    SceneSettings s;
    std::ifstream in(path);
    if (!in) return s;
    std::string line;
    auto vec3 = [&](std::istringstream& ls, const std::string& key) {
        std::string a, b, c;
        ls >> a >> b >> c;
        return Vec3{detail::parse_real(a, key), detail::parse_real(b, key), detail::parse_real(c, key)};
    };
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (auto& ch : line)
            if (ch == '=') ch = ' ';
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "focal_center") s.focal_center = vec3(ls, key);
        else if (key == "rotation_axis") s.animation.axis = normalize(vec3(ls, key));
        else if (key == "pivot") s.animation.pivot = vec3(ls, key), s.pivot_set = true;
        else if (key == "light_direction") s.light_direction = vec3(ls, key);
        else if (key == "light_color") s.light_color = vec3(ls, key);
        else if (key == "ambient") s.ambient = vec3(ls, key);
        else {
            std::string a;
            ls >> a;
            const double v = detail::parse_real(a, key);
            if (key == "focal_width") s.focal_width = v;
            else if (key == "focal_height") s.focal_height = v;
            else if (key == "rotation_rate") s.animation.rate = v;
            else if (key == "max_pixels") s.max_pixels = v;
            else throw Error(ErrorKind::MalformedInput, "unknown scene setting '" + key + "' in " + path.string());
        }
    }
    return s;
}

}  // namespace lfdpr
