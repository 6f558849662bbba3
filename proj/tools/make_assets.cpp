// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Generates the bundled procedural scenes:
//   hall  tiled-texture hall (floor tiles, brick walls, a coarse 64x64 painting, plain columns)
//   car   untextured multi-part vehicle on a ground plane, several overlapping depth layers
// Usage: make_assets <output dir>

#include <lfdpr/image.hpp>
#include <lfdpr/math.hpp>
#include <lfdpr/rng.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using lfdpr::Vec2;
using lfdpr::Vec3;

namespace {

class ObjWriter {
public:
    explicit ObjWriter(std::string mtllib) : mtllib_(std::move(mtllib)) {}

    void material(const std::string& name) { body_ << "usemtl " << name << "\n"; }

    // Quad p0 p1 p2 p3 (counter-clockwise seen from the front) with uv corners.
    void quad(Vec3 p0, Vec3 p1, Vec3 p2, Vec3 p3, Vec2 t0, Vec2 t1, Vec2 t2, Vec2 t3) {
        const Vec3 n = lfdpr::normalize(lfdpr::cross(p1 - p0, p3 - p0));
        const int a = vertex(p0, t0, n), b = vertex(p1, t1, n), c = vertex(p2, t2, n), d = vertex(p3, t3, n);
        face(a, b, c);
        face(a, c, d);
    }

    void quad(Vec3 p0, Vec3 p1, Vec3 p2, Vec3 p3) { quad(p0, p1, p2, p3, {0, 0}, {1, 0}, {1, 1}, {0, 1}); }

    // Axis-aligned box, faces outward.
    void box(Vec3 lo, Vec3 hi) {
        const Vec3 c[8] = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
                           {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
        quad(c[4], c[5], c[6], c[7]);  // +z
        quad(c[1], c[0], c[3], c[2]);  // -z
        quad(c[5], c[1], c[2], c[6]);  // +x
        quad(c[0], c[4], c[7], c[3]);  // -x
        quad(c[7], c[6], c[2], c[3]);  // +y
        quad(c[0], c[1], c[5], c[4]);  // -y
    }

    // Cylinder along z (wheel): radius r, from z0 to z1, smooth side normals.
    void cylinder_z(Vec3 center, double r, double z0, double z1, int segments) {
        for (int i = 0; i < segments; ++i) {
            const double a0 = 2 * std::numbers::pi * i / segments, a1 = 2 * std::numbers::pi * (i + 1) / segments;
            const Vec3 n0{std::cos(a0), std::sin(a0), 0}, n1{std::cos(a1), std::sin(a1), 0};
            const Vec3 p00 = center + n0 * r + Vec3{0, 0, z0}, p01 = center + n0 * r + Vec3{0, 0, z1};
            const Vec3 p10 = center + n1 * r + Vec3{0, 0, z0}, p11 = center + n1 * r + Vec3{0, 0, z1};
            const int a = vertex(p00, {0, 0}, n0), b = vertex(p10, {0, 0}, n1), c = vertex(p11, {0, 0}, n1),
                      d = vertex(p01, {0, 0}, n0);
            face(a, b, c);
            face(a, c, d);
            const Vec3 cz1 = center + Vec3{0, 0, z1}, cz0 = center + Vec3{0, 0, z0};
            const int e = vertex(cz1, {0, 0}, {0, 0, 1}), f = vertex(p01, {0, 0}, {0, 0, 1}),
                      g = vertex(p11, {0, 0}, {0, 0, 1});
            face(e, f, g);
            const int h = vertex(cz0, {0, 0}, {0, 0, -1}), k = vertex(p10, {0, 0}, {0, 0, -1}),
                      l = vertex(p00, {0, 0}, {0, 0, -1});
            face(h, k, l);
        }
    }

    void save(const fs::path& path) const {
        std::ofstream out(path);
        out << "mtllib " << mtllib_ << "\n" << verts_.str() << body_.str();
    }

private:
    int vertex(Vec3 p, Vec2 t, Vec3 n) {
        verts_ << "v " << p.x << " " << p.y << " " << p.z << "\n";
        verts_ << "vt " << t.x << " " << 1.0 - t.y << "\n";
        verts_ << "vn " << n.x << " " << n.y << " " << n.z << "\n";
        return ++count_;
    }
    void face(int a, int b, int c) {
        body_ << "f " << a << "/" << a << "/" << a << " " << b << "/" << b << "/" << b << " " << c << "/" << c << "/"
              << c << "\n";
    }

    std::string mtllib_;
    std::ostringstream verts_, body_;
    int count_ = 0;
};

double hash01(int x, int y, std::uint64_t salt) {
    const lfdpr::CounterRng rng(salt, static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32 |
                                          static_cast<std::uint32_t>(y));
    return rng.uniform(0);
}

// Smooth value noise with period `period` cells over a `size` texture (tileable).
double value_noise(double u, double v, int period, std::uint64_t salt) {
    const double x = u * period, y = v * period;
    const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
    const double tx = x - x0, ty = y - y0;
    auto at = [&](int i, int j) { return hash01(((i % period) + period) % period, ((j % period) + period) % period, salt); };
    const double sx = tx * tx * (3 - 2 * tx), sy = ty * ty * (3 - 2 * ty);
    const double a = at(x0, y0) + (at(x0 + 1, y0) - at(x0, y0)) * sx;
    const double b = at(x0, y0 + 1) + (at(x0 + 1, y0 + 1) - at(x0, y0 + 1)) * sx;
    return a + (b - a) * sy;
}

std::uint8_t u8(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

// Height field -> tangent-space normal map.
lfdpr::Image8 normal_map(const std::vector<double>& h, int size, double strength) {
    lfdpr::Image8 img(size, size, 3);
    auto H = [&](int x, int y) { return h[static_cast<std::size_t>((y + size) % size) * size + (x + size) % size]; };
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double dx = (H(x + 1, y) - H(x - 1, y)) * strength;
            const double dy = (H(x, y + 1) - H(x, y - 1)) * strength;
            const Vec3 n = lfdpr::normalize(Vec3{-dx, dy, 1.0});
            img.at(x, y, 0) = u8(n.x * 0.5 + 0.5);
            img.at(x, y, 1) = u8(n.y * 0.5 + 0.5);
            img.at(x, y, 2) = u8(n.z * 0.5 + 0.5);
        }
    return img;
}

void make_hall(const fs::path& dir) {
    fs::create_directories(dir);
    // Floor tiles: 4x4 tiles per texture, grout lines, per-tile tint and fine speckle.
    constexpr int kFloor = 256;
    lfdpr::Image8 floor(kFloor, kFloor, 3), floor_rough(kFloor, kFloor, 1);
    std::vector<double> floor_h(kFloor * kFloor);
    for (int y = 0; y < kFloor; ++y)
        for (int x = 0; x < kFloor; ++x) {
            const int tx = x / 64, ty = y / 64;
            const int lx = x % 64, ly = y % 64;
            const bool grout = lx < 3 || ly < 3;
            const bool dark = (tx + ty) % 2 == 1;
            const double tint = 0.85 + 0.3 * hash01(tx, ty, 11);
            const double speckle = hash01(x, y, 12) - 0.5;
            const double vein = value_noise(x / double(kFloor), y / double(kFloor), 16, 13);
            double r, g, b;
            if (grout) {
                r = g = b = 0.18 + 0.05 * speckle;
            } else if (dark) {
                r = (0.22 + 0.10 * vein) * tint + 0.08 * speckle;
                g = (0.20 + 0.08 * vein) * tint + 0.08 * speckle;
                b = (0.24 + 0.12 * vein) * tint + 0.08 * speckle;
            } else {
                r = (0.80 + 0.12 * vein) * tint + 0.10 * speckle;
                g = (0.74 + 0.10 * vein) * tint + 0.10 * speckle;
                b = (0.62 + 0.08 * vein) * tint + 0.10 * speckle;
            }
            floor.at(x, y, 0) = u8(r);
            floor.at(x, y, 1) = u8(g);
            floor.at(x, y, 2) = u8(b);
            floor_rough.at(x, y, 0) = u8(grout ? 0.9 : (dark ? 0.25 : 0.4) + 0.1 * vein);
            floor_h[static_cast<std::size_t>(y) * kFloor + x] = grout ? 0.0 : 1.0;
        }
    lfdpr::write_png(dir / "floor_albedo.png", floor);
    lfdpr::write_png(dir / "floor_roughness.png", floor_rough);
    lfdpr::write_png(dir / "floor_normal.png", normal_map(floor_h, kFloor, 0.6));

    // Bricks: 128x128, 4 courses of 2 bricks, offset every other course.
    constexpr int kBrick = 128;
    lfdpr::Image8 brick(kBrick, kBrick, 3);
    std::vector<double> brick_h(kBrick * kBrick);
    for (int y = 0; y < kBrick; ++y)
        for (int x = 0; x < kBrick; ++x) {
            const int course = y / 32;
            const int xs = (x + (course % 2) * 32) % kBrick;
            const int id = xs / 64;
            const bool mortar = y % 32 < 3 || xs % 64 < 3;
            const double tint = 0.8 + 0.35 * hash01(id, course, 21);
            const double grain = value_noise(x / double(kBrick), y / double(kBrick), 32, 22) - 0.5;
            double r = 0.62 * tint + 0.15 * grain, g = 0.30 * tint + 0.10 * grain, b = 0.22 * tint + 0.08 * grain;
            if (mortar) r = g = b = 0.7 + 0.1 * grain;
            brick.at(x, y, 0) = u8(r);
            brick.at(x, y, 1) = u8(g);
            brick.at(x, y, 2) = u8(b);
            brick_h[static_cast<std::size_t>(y) * kBrick + x] = mortar ? 0.0 : 1.0 + 0.3 * grain;
        }
    lfdpr::write_png(dir / "brick_albedo.png", brick);
    lfdpr::write_png(dir / "brick_normal.png", normal_map(brick_h, kBrick, 0.5));

    // Coarse painting: 64x64, stripes and a disc, stretched over a large panel.
    constexpr int kPaint = 64;
    lfdpr::Image8 paint(kPaint, kPaint, 3);
    for (int y = 0; y < kPaint; ++y)
        for (int x = 0; x < kPaint; ++x) {
            const double u = (x + 0.5) / kPaint, v = (y + 0.5) / kPaint;
            const bool disc = (u - 0.62) * (u - 0.62) + (v - 0.42) * (v - 0.42) < 0.06;
            const int band = static_cast<int>(v * 6);
            double r = band % 2 ? 0.15 : 0.2, g = band % 2 ? 0.35 : 0.5, b = band % 2 ? 0.6 : 0.75;
            if (disc) r = 0.95, g = 0.75, b = 0.2;
            paint.at(x, y, 0) = u8(r);
            paint.at(x, y, 1) = u8(g);
            paint.at(x, y, 2) = u8(b);
        }
    lfdpr::write_png(dir / "painting_albedo.png", paint);

    std::ofstream mtl(dir / "hall.mtl");
    mtl << "newmtl floor\nKd 0.8 0.8 0.8\nPr 0.4\nPm 0\nmap_Kd floor_albedo.png\nmap_Bump floor_normal.png\n"
           "map_Pr floor_roughness.png\n\n"
        << "newmtl brick\nKd 0.6 0.3 0.2\nPr 0.8\nPm 0\nmap_Kd brick_albedo.png\nmap_Bump brick_normal.png\n\n"
        << "newmtl painting\nKd 0.5 0.5 0.5\nPr 0.6\nPm 0\nmap_Kd painting_albedo.png\n\n"
        << "newmtl column\nKd 0.78 0.76 0.72\nPr 0.35\nPm 0\n\n"
        << "newmtl trim\nKd 0.75 0.6 0.3\nPr 0.25\nPm 1\n";

    ObjWriter obj("hall.mtl");
    const double x0 = -3, x1 = 3, y0 = -1, y1 = 2.5, zb = -8, zf = 1.5;
    obj.material("floor");  // uv repeats every 2 units
    obj.quad({x0, y0, zf}, {x1, y0, zf}, {x1, y0, zb}, {x0, y0, zb}, {x0 / 2, zf / 2}, {x1 / 2, zf / 2},
             {x1 / 2, zb / 2}, {x0 / 2, zb / 2});
    obj.material("brick");
    obj.quad({x0, y0, zb}, {x1, y0, zb}, {x1, y1, zb}, {x0, y1, zb}, {x0 / 2, y0 / 2}, {x1 / 2, y0 / 2},
             {x1 / 2, y1 / 2}, {x0 / 2, y1 / 2});
    obj.quad({x0, y0, zf}, {x0, y0, zb}, {x0, y1, zb}, {x0, y1, zf}, {zf / 2, y0 / 2}, {zb / 2, y0 / 2},
             {zb / 2, y1 / 2}, {zf / 2, y1 / 2});
    obj.quad({x1, y0, zb}, {x1, y0, zf}, {x1, y1, zf}, {x1, y1, zb}, {zb / 2, y0 / 2}, {zf / 2, y0 / 2},
             {zf / 2, y1 / 2}, {zb / 2, y1 / 2});
    obj.material("painting");
    obj.quad({-1.2, 0.0, zb + 0.02}, {1.2, 0.0, zb + 0.02}, {1.2, 1.6, zb + 0.02}, {-1.2, 1.6, zb + 0.02});
    obj.material("column");
    for (double z : {-1.5, -4.0, -6.5}) {
        obj.box({-2.2, y0, z - 0.2}, {-1.8, y1, z + 0.2});
        obj.box({1.8, y0, z - 0.2}, {2.2, y1, z + 0.2});
    }
    obj.material("trim");
    obj.box({-0.5, y0, -2.9}, {0.5, -0.6, -2.5});
    obj.save(dir / "hall.obj");

    std::ofstream scene(dir / "hall.scene");
    scene << "# Framing and animation for the tiled hall.\n"
             "focal_center = 0 0.1 -2.5\n"
             "focal_width = 5.0\n"
             "rotation_axis = 0 1 0\n"
             "rotation_rate = 0.0006283185307179586\n"
             "pivot = 0 0 -3\n"
             "max_pixels = 100\n"
             "light_direction = -0.35 0.8 0.5\n"
             "light_color = 2.4 2.3 2.1\n"
             "ambient = 0.22 0.22 0.25\n";
}

void make_car(const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream mtl(dir / "car.mtl");
    mtl << "newmtl paint\nKd 0.7 0.06 0.05\nPr 0.3\nPm 0.6\n\n"
        << "newmtl glass\nKd 0.08 0.1 0.12\nPr 0.05\nPm 0\n\n"
        << "newmtl tire\nKd 0.04 0.04 0.04\nPr 0.9\nPm 0\n\n"
        << "newmtl chrome\nKd 0.9 0.9 0.9\nPr 0.15\nPm 1\n\n"
        << "newmtl ground\nKd 0.45 0.47 0.5\nPr 0.7\nPm 0\n\n"
        << "newmtl light\nKd 1.0 0.9 0.6\nPr 0.2\nPm 0\n";

    ObjWriter obj("car.mtl");
    obj.material("ground");
    obj.quad({-4, -0.6, 3}, {4, -0.6, 3}, {4, -0.6, -4}, {-4, -0.6, -4});
    obj.material("paint");
    obj.box({-2.0, -0.3, -0.8}, {2.0, 0.35, 0.8});   // lower body
    obj.box({-1.1, 0.35, -0.7}, {0.9, 0.95, 0.7});   // cabin
    obj.box({1.9, -0.25, -0.75}, {2.15, 0.1, 0.75});  // bumper block
    obj.material("glass");
    obj.box({-1.0, 0.45, 0.7}, {0.8, 0.88, 0.72});   // side window
    obj.box({0.9, 0.42, -0.62}, {0.92, 0.88, 0.62}); // windscreen
    obj.material("chrome");
    obj.box({2.15, -0.2, -0.7}, {2.22, 0.05, 0.7});
    obj.box({-2.08, -0.2, -0.7}, {-2.0, 0.05, 0.7});
    obj.material("light");
    obj.box({2.0, 0.12, 0.45}, {2.05, 0.28, 0.7});
    obj.box({2.0, 0.12, -0.7}, {2.05, 0.28, -0.45});
    obj.material("tire");
    for (double x : {-1.3, 1.3})
        for (double side : {-1.0, 1.0}) {
            const double z0 = side > 0 ? 0.62 : -0.92, z1 = side > 0 ? 0.92 : -0.62;
            obj.cylinder_z({x, -0.3, 0}, 0.32, z0, z1, 20);
        }
    obj.material("chrome");
    for (double x : {-1.3, 1.3}) {
        obj.cylinder_z({x, -0.3, 0}, 0.16, 0.92, 0.95, 12);
        obj.cylinder_z({x, -0.3, 0}, 0.16, -0.95, -0.92, 12);
    }
    obj.material("paint");  // a second, farther car body for depth layering
    obj.box({-3.2, -0.4, -3.2}, {-0.8, 0.2, -2.2});
    obj.save(dir / "car.obj");

    std::ofstream scene(dir / "car.scene");
    scene << "# Framing and animation for the untextured vehicle.\n"
             "focal_center = 0 0.1 0\n"
             "focal_width = 6.0\n"
             "rotation_axis = 0 1 0\n"
             "rotation_rate = 0.006283185307179587\n"
             "pivot = 0 0 0\n"
             "max_pixels = 100\n"
             "light_direction = 0.3 0.85 0.45\n"
             "light_color = 2.6 2.5 2.3\n"
             "ambient = 0.25 0.25 0.28\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_assets <output dir>\n";
        return 2;
    }
    const fs::path root = argv[1];
    try {
        make_hall(root / "hall");
        make_car(root / "car");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
