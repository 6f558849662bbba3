// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Pieces shared verbatim by the point splatter and the reference rasterizer: packed
// depth/payload view buffers, the depth-key ramp, and per-view triangle setup with
// fixed-point edge functions and a top-left fill rule.

#pragma once

#include <lfdpr/image.hpp>
#include <lfdpr/lfd_model.hpp>
#include <lfdpr/math.hpp>

#include <array>
#include <atomic>
#include <cstdint>
#include <tuple>
#include <vector>

namespace lfdpr {

/// W x H grid of 64-bit words: depth key in the high 32 bits, payload in the low 32.
/// Writers keep the numerically smaller word, so the nearest fragment wins and equal depths
/// are resolved by payload bits, independent of write order.
class ViewBuffer {
public:
    static constexpr std::uint64_t kClear = ~std::uint64_t{0};

    ViewBuffer() = default;
    ViewBuffer(int width, int height)
        : width_(width), height_(height), words_(static_cast<std::size_t>(width) * height, kClear) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return words_.size(); }
    std::size_t byte_size() const { return words_.size() * sizeof(std::uint64_t); }

    void clear() { std::fill(words_.begin(), words_.end(), kClear); }

    std::uint64_t word(int x, int y) const { return load(static_cast<std::size_t>(y) * width_ + x); }
    std::uint64_t load(std::size_t i) const {
        return std::atomic_ref<const std::uint64_t>(words_[i]).load(std::memory_order_relaxed);
    }
    const std::vector<std::uint64_t>& words() const { return words_; }

    /// Lock-free atomic minimum. Returns true when `w` was stored.
    bool write_min(std::size_t i, std::uint64_t w) {
        std::atomic_ref<std::uint64_t> ref(words_[i]);
        std::uint64_t cur = ref.load(std::memory_order_relaxed);
        while (w < cur) {
            if (ref.compare_exchange_weak(cur, w, std::memory_order_relaxed)) return true;
        }
        return false;
    }

    std::uint32_t depth_key_at(std::size_t i) const { return static_cast<std::uint32_t>(load(i) >> 32); }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint64_t> words_;
};

static_assert(sizeof(std::uint64_t) == 8);

/// Monotone 32-bit fixed-point ramp over [near, far]. 0xFFFFFFFF is never produced, so a
/// word of all ones always means "untouched".
inline std::uint32_t depth_key(double depth, double near, double far) {
    const double t = std::clamp((depth - near) / (far - near), 0.0, 1.0);
    return static_cast<std::uint32_t>(t * 4294967294.0);
}

inline std::uint64_t pack_word(std::uint32_t key, std::uint32_t payload) {
    return (static_cast<std::uint64_t>(key) << 32) | payload;
}

struct Rgb8 {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb8&) const = default;
};

inline std::uint32_t pack_rgba(Rgb8 c) {
    return static_cast<std::uint32_t>(c.r) | (static_cast<std::uint32_t>(c.g) << 8) |
           (static_cast<std::uint32_t>(c.b) << 16) | (0xFFu << 24);
}

inline Rgb8 unpack_rgba(std::uint32_t p) {
    return {static_cast<std::uint8_t>(p & 0xFF), static_cast<std::uint8_t>((p >> 8) & 0xFF),
            static_cast<std::uint8_t>((p >> 16) & 0xFF)};
}

/// RGB image of a buffer's payloads; untouched pixels get `background`.
inline Image8 resolve_color(const ViewBuffer& buf, Rgb8 background = {}) {
    Image8 img(buf.width(), buf.height(), 3);
    for (std::size_t i = 0; i < buf.size(); ++i) {
        const std::uint64_t w = buf.load(i);
        const Rgb8 c = w == ViewBuffer::kClear ? background : unpack_rgba(static_cast<std::uint32_t>(w));
        img.data[3 * i] = c.r;
        img.data[3 * i + 1] = c.g;
        img.data[3 * i + 2] = c.b;
    }
    return img;
}

/// 16-bit depth for debugging (top 16 bits of the key; untouched = 65535).
inline std::vector<std::uint16_t> resolve_depth16(const ViewBuffer& buf) {
    std::vector<std::uint16_t> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = static_cast<std::uint16_t>(buf.load(i) >> 48);
    return out;
}

/// Per-view triangle setup: near-plane clip, fixed-point snap (8 subpixel bits), fan
/// triangulation, back-face and viewport culling. Each fan vertex carries its barycentric
/// coordinates with respect to the original triangle, so attributes interpolate correctly
/// through clipping.
class TriangleSetup {
public:
    static constexpr int kSubpixelBits = 8;
    static constexpr double kSubpixelScale = 1 << kSubpixelBits;
    static constexpr double kGuardBand = 16384.0;  // pixels
    static constexpr int kMaxVerts = 9;

    struct Fan {
        std::array<std::int64_t, 3> x{}, y{};
        std::array<std::int64_t, 3> bias{};  // 0 for top-left edges, -1 otherwise
        std::int64_t area2 = 0;              // twice the signed area, > 0
        std::array<double, 3> inv_depth{};
        std::array<Vec3, 3> bary_over_depth{};  // original-triangle barycentrics / depth

        /// Edge function of edge i (from vertex i to i+1) at fixed-point sample (sx, sy).
        std::int64_t edge(int i, std::int64_t sx, std::int64_t sy) const {
            const int j = i == 2 ? 0 : i + 1;
            return (x[j] - x[i]) * (sy - y[i]) - (y[j] - y[i]) * (sx - x[i]);
        }
        bool inside(std::int64_t sx, std::int64_t sy) const {
            return edge(0, sx, sy) + bias[0] >= 0 && edge(1, sx, sy) + bias[1] >= 0 && edge(2, sx, sy) + bias[2] >= 0;
        }
    };

    TriangleSetup() = default;

    TriangleSetup(const ViewCamera& view, const Vec3& a, const Vec3& b, const Vec3& c) { build(view, a, b, c); }

    bool visible() const { return fan_count_ > 0; }
    bool front_facing() const { return front_facing_; }
    int fan_count() const { return fan_count_; }
    const Fan& fan(int i) const { return fans_[i]; }

    // Pixel bounding box of covered samples, clamped to the viewport (inclusive).
    int min_x() const { return min_x_; }
    int min_y() const { return min_y_; }
    int max_x() const { return max_x_; }
    int max_y() const { return max_y_; }

    static std::int64_t sample_coord(int pixel) {
        return (static_cast<std::int64_t>(pixel) << kSubpixelBits) + (1 << (kSubpixelBits - 1));
    }

    /// Index of the fan triangle covering pixel (px, py)'s center, or -1.
    int covering_fan(int px, int py) const {
        const std::int64_t sx = sample_coord(px), sy = sample_coord(py);
        for (int i = 0; i < fan_count_; ++i)
            if (fans_[i].inside(sx, sy)) return i;
        return -1;
    }

    /// View-space depth at pixel (px, py)'s center using fan triangle `f`.
    double depth_at(int f, int px, int py) const {
        const Fan& t = fans_[f];
        const std::int64_t sx = sample_coord(px), sy = sample_coord(py);
        const double w0 = static_cast<double>(t.edge(1, sx, sy));
        const double w1 = static_cast<double>(t.edge(2, sx, sy));
        const double w2 = static_cast<double>(t.edge(0, sx, sy));
        const double inv = (w0 * t.inv_depth[0] + w1 * t.inv_depth[1] + w2 * t.inv_depth[2]) / t.area2;
        return 1.0 / inv;
    }

private:
    void build(const ViewCamera& view, const Vec3& a, const Vec3& b, const Vec3& c) {
        struct ClipVert { Vec3 p; Vec3 bary; double depth; };
        std::array<ClipVert, kMaxVerts> poly{};
        int n = 0;
        const std::array<ClipVert, 3> in{{{a, {1, 0, 0}, view.view_depth(a)},
                                          {b, {0, 1, 0}, view.view_depth(b)},
                                          {c, {0, 0, 1}, view.view_depth(c)}}};
        const double near = view.near;
        for (int i = 0; i < 3; ++i) {
            const ClipVert& p = in[i];
            const ClipVert& q = in[(i + 1) % 3];
            const bool ip = p.depth >= near, iq = q.depth >= near;
            if (ip) poly[n++] = p;
            if (ip != iq) {
                // Interpolate from the canonically smaller endpoint so shared edges clip identically.
                const bool swap = std::tie(q.p.x, q.p.y, q.p.z) < std::tie(p.p.x, p.p.y, p.p.z);
                const ClipVert& s = swap ? q : p;
                const ClipVert& e = swap ? p : q;
                const double t = (near - s.depth) / (e.depth - s.depth);
                poly[n++] = {lerp(s.p, e.p, t), lerp(s.bary, e.bary, t), near};
            }
        }
        if (n < 3) return;

        struct ScreenVert { double x, y; double inv_depth; Vec3 bary; };
        std::array<ScreenVert, kMaxVerts> sv{};
        bool outside_guard = false;
        for (int i = 0; i < n; ++i) {
            const ScreenPoint s = view.project(poly[i].p);
            sv[i] = {s.x, s.y, 1.0 / poly[i].depth, poly[i].bary};
            outside_guard |= std::abs(s.x) > kGuardBand || std::abs(s.y) > kGuardBand;
        }
        if (outside_guard) n = clip_guard_band(sv, n);
        if (n < 3) return;

        std::array<std::int64_t, kMaxVerts> fx{}, fy{};
        for (int i = 0; i < n; ++i) {
            fx[i] = std::llround(sv[i].x * kSubpixelScale);
            fy[i] = std::llround(sv[i].y * kSubpixelScale);
        }
        // Polygon orientation from the snapped coordinates; front faces (counter-clockwise in
        // world space, seen from the eye) have negative signed area with y pointing down.
        std::int64_t area2 = 0;
        for (int i = 0; i < n; ++i) {
            const int j = (i + 1) % n;
            area2 += fx[i] * fy[j] - fx[j] * fy[i];
        }
        if (area2 == 0) return;
        front_facing_ = area2 < 0;

        std::int64_t bx0 = fx[0], bx1 = fx[0], by0 = fy[0], by1 = fy[0];
        for (int i = 1; i < n; ++i) {
            bx0 = std::min(bx0, fx[i]);
            bx1 = std::max(bx1, fx[i]);
            by0 = std::min(by0, fy[i]);
            by1 = std::max(by1, fy[i]);
        }
        // Pixel centers sit at (p + 0.5) in pixel units.
        const auto lo = [](std::int64_t v) {
            return static_cast<int>((v - (1 << (kSubpixelBits - 1)) + (1 << kSubpixelBits) - 1) >> kSubpixelBits);
        };
        const auto hi = [](std::int64_t v) { return static_cast<int>((v - (1 << (kSubpixelBits - 1))) >> kSubpixelBits); };
        min_x_ = std::max(0, lo(bx0));
        min_y_ = std::max(0, lo(by0));
        max_x_ = std::min(view.width - 1, hi(bx1));
        max_y_ = std::min(view.height - 1, hi(by1));
        if (min_x_ > max_x_ || min_y_ > max_y_) return;

        for (int k = 1; k + 1 < n; ++k) {
            std::array<int, 3> idx{0, k, k + 1};
            if (!front_facing_) std::swap(idx[1], idx[2]);
            // Orient every fan triangle to positive area (inside => edge functions >= 0).
            Fan f;
            for (int m = 0; m < 3; ++m) {
                f.x[m] = fx[idx[m]];
                f.y[m] = fy[idx[m]];
            }
            f.area2 = (f.x[1] - f.x[0]) * (f.y[2] - f.y[0]) - (f.y[1] - f.y[0]) * (f.x[2] - f.x[0]);
            if (f.area2 < 0) {
                std::swap(idx[1], idx[2]);
                std::swap(f.x[1], f.x[2]);
                std::swap(f.y[1], f.y[2]);
                f.area2 = -f.area2;
            }
            if (f.area2 == 0) continue;
            for (int m = 0; m < 3; ++m) {
                const int j = m == 2 ? 0 : m + 1;
                const std::int64_t dx = f.x[j] - f.x[m];
                const std::int64_t dy = f.y[j] - f.y[m];
                const bool top = dy == 0 && dx > 0;
                const bool left = dy < 0;
                f.bias[m] = (top || left) ? 0 : -1;
                f.inv_depth[m] = sv[idx[m]].inv_depth;
                f.bary_over_depth[m] = sv[idx[m]].bary * sv[idx[m]].inv_depth;
            }
            fans_[fan_count_++] = f;
        }
    }

    template <typename V>
    static int clip_guard_band(std::array<V, kMaxVerts>& v, int n) {
        const double g = kGuardBand;
        auto clip = [&](auto coord, double bound, bool keep_less) {
            std::array<V, kMaxVerts> out{};
            int m = 0;
            for (int i = 0; i < n; ++i) {
                const V& p = v[i];
                const V& q = v[(i + 1) % n];
                const bool ip = keep_less ? coord(p) <= bound : coord(p) >= bound;
                const bool iq = keep_less ? coord(q) <= bound : coord(q) >= bound;
                if (ip && m < kMaxVerts) out[m++] = p;
                if (ip != iq && m < kMaxVerts) {
                    const double t = (bound - coord(p)) / (coord(q) - coord(p));
                    V r;
                    r.x = p.x + (q.x - p.x) * t;
                    r.y = p.y + (q.y - p.y) * t;
                    r.inv_depth = p.inv_depth + (q.inv_depth - p.inv_depth) * t;
                    // Barycentrics/depth are affine in screen space; renormalize afterwards.
                    const Vec3 bw = lerp(p.bary * p.inv_depth, q.bary * q.inv_depth, t);
                    r.bary = bw / r.inv_depth;
                    out[m++] = r;
                }
            }
            v = out;
            n = m;
        };
        auto cx = [](const V& p) { return p.x; };
        auto cy = [](const V& p) { return p.y; };
        clip(cx, -g, false);
        if (n >= 3) clip(cx, g, true);
        if (n >= 3) clip(cy, -g, false);
        if (n >= 3) clip(cy, g, true);
        return n;
    }

    std::array<Fan, kMaxVerts - 2> fans_{};
    int fan_count_ = 0;
    bool front_facing_ = false;
    int min_x_ = 0, min_y_ = 0, max_x_ = -1, max_y_ = -1;
};

}  // namespace lfdpr
