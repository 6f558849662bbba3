// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace lfdpr {

template <typename T>
struct Vec2T {
    T x{}, y{};

    constexpr Vec2T() = default;
    constexpr Vec2T(T x_, T y_) : x(x_), y(y_) {}
    template <typename U>
    constexpr explicit Vec2T(const Vec2T<U>& o) : x(static_cast<T>(o.x)), y(static_cast<T>(o.y)) {}

    constexpr Vec2T operator+(const Vec2T& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2T operator-(const Vec2T& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2T operator*(T s) const { return {x * s, y * s}; }
    constexpr Vec2T operator/(T s) const { return {x / s, y / s}; }
    constexpr Vec2T& operator+=(const Vec2T& o) { x += o.x; y += o.y; return *this; }
    constexpr bool operator==(const Vec2T&) const = default;
};

template <typename T>
struct Vec3T {
    T x{}, y{}, z{};

    constexpr Vec3T() = default;
    constexpr Vec3T(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}
    template <typename U>
    constexpr explicit Vec3T(const Vec3T<U>& o)
        : x(static_cast<T>(o.x)), y(static_cast<T>(o.y)), z(static_cast<T>(o.z)) {}

    constexpr Vec3T operator+(const Vec3T& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3T operator-(const Vec3T& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3T operator-() const { return {-x, -y, -z}; }
    constexpr Vec3T operator*(T s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3T operator/(T s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3T& operator+=(const Vec3T& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3T& operator*=(T s) { x *= s; y *= s; z *= s; return *this; }
    constexpr T operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr bool operator==(const Vec3T&) const = default;
};

using Vec2 = Vec2T<double>;
using Vec3 = Vec3T<double>;
using Vec2f = Vec2T<float>;
using Vec3f = Vec3T<float>;

template <typename T>
constexpr Vec3T<T> operator*(T s, const Vec3T<T>& v) { return v * s; }

template <typename T>
constexpr T dot(const Vec3T<T>& a, const Vec3T<T>& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
template <typename T>
constexpr T dot(const Vec2T<T>& a, const Vec2T<T>& b) { return a.x * b.x + a.y * b.y; }

template <typename T>
constexpr Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
template <typename T>
constexpr T cross(const Vec2T<T>& a, const Vec2T<T>& b) { return a.x * b.y - a.y * b.x; }

template <typename T>
T length(const Vec3T<T>& v) { return std::sqrt(dot(v, v)); }
template <typename T>
T length(const Vec2T<T>& v) { return std::sqrt(dot(v, v)); }

template <typename T>
Vec3T<T> normalize(const Vec3T<T>& v) {
    const T len = length(v);
    return len > T(0) ? v / len : Vec3T<T>{};
}

template <typename T>
constexpr Vec3T<T> lerp(const Vec3T<T>& a, const Vec3T<T>& b, T t) { return a + (b - a) * t; }
template <typename T>
constexpr Vec2T<T> lerp(const Vec2T<T>& a, const Vec2T<T>& b, T t) { return a + (b - a) * t; }

inline Vec3 to_double(const Vec3f& v) { return Vec3(v); }
inline Vec3f to_float(const Vec3& v) { return Vec3f(v); }

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * length(cross(b - a, c - a));
}
inline double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * std::abs(cross(b - a, c - a));
}

/// Rotation about a unit axis (Rodrigues).
inline Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1.0 - c));
}

/// Octahedral unit-vector encoding into two snorm16 values.
inline std::uint32_t encode_octahedral(const Vec3& n) {
    const double l1 = std::abs(n.x) + std::abs(n.y) + std::abs(n.z);
    double x = l1 > 0 ? n.x / l1 : 0.0;
    double y = l1 > 0 ? n.y / l1 : 0.0;
    if (n.z < 0) {
        const double ox = (1.0 - std::abs(y)) * (x >= 0 ? 1.0 : -1.0);
        const double oy = (1.0 - std::abs(x)) * (y >= 0 ? 1.0 : -1.0);
        x = ox;
        y = oy;
    }
    const auto q = [](double v) {
        return static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(std::clamp(v, -1.0, 1.0) * 32767.0)));
    };
    return static_cast<std::uint32_t>(q(x)) | (static_cast<std::uint32_t>(q(y)) << 16);
}

inline Vec3 decode_octahedral(std::uint32_t bits) {
    const double x0 = static_cast<std::int16_t>(bits & 0xFFFFu) / 32767.0;
    const double y0 = static_cast<std::int16_t>(bits >> 16) / 32767.0;
    Vec3 n{x0, y0, 1.0 - std::abs(x0) - std::abs(y0)};
    if (n.z < 0) {
        const double ox = (1.0 - std::abs(y0)) * (x0 >= 0 ? 1.0 : -1.0);
        const double oy = (1.0 - std::abs(x0)) * (y0 >= 0 ? 1.0 : -1.0);
        n.x = ox;
        n.y = oy;
    }
    return normalize(n);
}

inline std::uint16_t to_unorm16(double v) {
    return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
}
inline double from_unorm16(std::uint16_t v) { return v / 65535.0; }

}  // namespace lfdpr
