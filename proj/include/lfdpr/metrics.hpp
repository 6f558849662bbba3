// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <lfdpr/error.hpp>
#include <lfdpr/image.hpp>
#include <lfdpr/raster.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace lfdpr {

struct QualityReport {
    double rmse = 0;
    double ssim = 1;
    double coverage_agreement = 1;
};

namespace detail {

template <typename T>
void require_same_shape(const ImageT<T>& a, const ImageT<T>& b, const char* what) {
    if (!a.same_shape(b))
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": images differ in size (" +
                                                      std::to_string(a.width) + "x" + std::to_string(a.height) + "x" +
                                                      std::to_string(a.channels) + " vs " + std::to_string(b.width) +
                                                      "x" + std::to_string(b.height) + "x" +
                                                      std::to_string(b.channels) + ")");
}

}  // namespace detail

/// Root mean squared error over every channel sample, 0-255 scale.
inline double rmse(const Image8& a, const Image8& b) {
    detail::require_same_shape(a, b, "rmse");
    if (a.data.empty()) return 0.0;
    double sum = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - b.data[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.data.size()));
}

/// Rec. 601 luma, one value per pixel (single-channel images pass through).
inline std::vector<double> luma(const Image8& img) {
    std::vector<double> out(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint8_t* p = &img.data[i * img.channels];
        out[i] = img.channels >= 3 ? 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2] : p[0];
    }
    return out;
}

/// Windowed SSIM on luma: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03, L = 255,
/// averaged over all windows lying fully inside the image.
inline double ssim(const Image8& a, const Image8& b) {
    detail::require_same_shape(a, b, "ssim");
    constexpr int kWin = 11;
    constexpr int kHalf = kWin / 2;
    if (a.width < kWin || a.height < kWin)
        throw Error(ErrorKind::DimensionMismatch, "ssim: image smaller than the 11x11 window");
    std::array<double, kWin> w{};
    double wsum = 0;
    for (int i = 0; i < kWin; ++i) {
        const double x = i - kHalf;
        w[i] = std::exp(-x * x / (2 * 1.5 * 1.5));
        wsum += w[i];
    }
    for (auto& v : w) v /= wsum;

    const std::vector<double> la = luma(a), lb = luma(b);
    const int W = a.width, H = a.height;
    const int ow = W - kWin + 1, oh = H - kWin + 1;
    // Horizontal pass into five moment planes, then vertical pass.
    std::vector<std::array<double, 5>> hpass(static_cast<std::size_t>(ow) * H);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < ow; ++x) {
            std::array<double, 5> m{};
            for (int k = 0; k < kWin; ++k) {
                const std::size_t i = static_cast<std::size_t>(y) * W + x + k;
                const double pa = la[i], pb = lb[i];
                m[0] += w[k] * pa;
                m[1] += w[k] * pb;
                m[2] += w[k] * pa * pa;
                m[3] += w[k] * pb * pb;
                m[4] += w[k] * pa * pb;
            }
            hpass[static_cast<std::size_t>(y) * ow + x] = m;
        }
    constexpr double L = 255.0;
    constexpr double C1 = (0.01 * L) * (0.01 * L);
    constexpr double C2 = (0.03 * L) * (0.03 * L);
    double total = 0;
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            std::array<double, 5> m{};
            for (int k = 0; k < kWin; ++k) {
                const auto& h = hpass[static_cast<std::size_t>(y + k) * ow + x];
                for (int c = 0; c < 5; ++c) m[c] += w[k] * h[c];
            }
            const double mu_a = m[0], mu_b = m[1];
            const double va = m[2] - mu_a * mu_a, vb = m[3] - mu_b * mu_b, cov = m[4] - mu_a * mu_b;
            total += ((2 * mu_a * mu_b + C1) * (2 * cov + C2)) /
                     ((mu_a * mu_a + mu_b * mu_b + C1) * (va + vb + C2));
        }
    return total / (static_cast<double>(ow) * oh);
}

struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto v : data) n += v != 0;
        return n;
    }
};

/// Written pixels of a view buffer.
inline Mask coverage_mask(const ViewBuffer& buf) {
    Mask m{buf.width(), buf.height(), std::vector<std::uint8_t>(buf.size())};
    for (std::size_t i = 0; i < buf.size(); ++i) m.data[i] = buf.load(i) != ViewBuffer::kClear;
    return m;
}

/// Square erosion of radius r; pixels beyond the border count as covered.
inline Mask erode(const Mask& m, int r) {
    if (r <= 0) return m;
    // Separable: horizontal then vertical min.
    Mask h{m.width, m.height, std::vector<std::uint8_t>(m.data.size())};
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            bool all = true;
            for (int k = -r; k <= r && all; ++k) {
                const int xx = x + k;
                if (xx >= 0 && xx < m.width) all = m.at(xx, y);
            }
            h.data[static_cast<std::size_t>(y) * m.width + x] = all;
        }
    Mask out{m.width, m.height, std::vector<std::uint8_t>(m.data.size())};
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            bool all = true;
            for (int k = -r; k <= r && all; ++k) {
                const int yy = y + k;
                if (yy >= 0 && yy < m.height) all = h.at(x, yy);
            }
            out.data[static_cast<std::size_t>(y) * m.width + x] = all;
        }
    return out;
}

/// Intersection over union of the eroded masks; two empty masks agree fully.
inline double coverage_agreement(const Mask& a, const Mask& b, int erode_px = 1) {
    if (a.width != b.width || a.height != b.height)
        throw Error(ErrorKind::DimensionMismatch, "coverage_agreement: masks differ in size");
    const Mask ea = erode(a, erode_px), eb = erode(b, erode_px);
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < ea.data.size(); ++i) {
        inter += ea.data[i] && eb.data[i];
        uni += ea.data[i] || eb.data[i];
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// RMS of the luma residual after a 3x3 box blur, over interior pixels. Measures energy above
/// roughly a third of the sampling rate (aliasing).
inline double high_frequency_rms(const Image8& img) {
    if (img.width < 3 || img.height < 3) return 0.0;
    const std::vector<double> l = luma(img);
    double sum = 0;
    std::size_t n = 0;
    for (int y = 1; y + 1 < img.height; ++y)
        for (int x = 1; x + 1 < img.width; ++x) {
            double box = 0;
            for (int j = -1; j <= 1; ++j)
                for (int i = -1; i <= 1; ++i) box += l[static_cast<std::size_t>(y + j) * img.width + x + i];
            const double d = l[static_cast<std::size_t>(y) * img.width + x] - box / 9.0;
            sum += d * d;
            ++n;
        }
    return std::sqrt(sum / static_cast<double>(n));
}

inline QualityReport compare_images(const Image8& a, const Image8& b) {
    QualityReport q;
    q.rmse = rmse(a, b);
    q.ssim = ssim(a, b);
    return q;
}

}  // namespace lfdpr
