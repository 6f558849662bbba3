// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Light field display model: panel + slanted lenticular sheet, the horizontal camera
// array it implies, and the subpixel -> (view, lens phase) mapping used to build the
// elemental image array.
//
// World convention: the display plane is z = const and faces +z; every camera looks
// down -z with an off-axis (sheared) frustum through the same focal rectangle.

#pragma once

#include <lfdpr/error.hpp>
#include <lfdpr/math.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace lfdpr {

struct LfdConfig {
    int panel_width = 3840;
    int panel_height = 2160;
    double screen_width_mm = 345.40;
    double screen_height_mm = 194.30;
    double lens_width_mm = 0.72;
    double pixel_pitch_mm = 0.09;
    double subpixel_pitch_mm = 0.03;
    double lens_tilt_deg = -9.66;
    double lens_count = 479.36;        // effective (screen width / lens width as manufactured)
    double lens_count_ideal = 479.72;  // informational
    int view_count = 48;
    int view_width = 480;
    int view_height = 360;
    double viewing_distance_mm = 600.0;
    double eye_span_mm = 300.0;

    /// Effective lens width measured in subpixels.
    double lens_subpixels() const { return (screen_width_mm / lens_count) / subpixel_pitch_mm; }

    void validate() const {
        auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidConfig, "display config: " + m); };
        if (panel_width < 1 || panel_height < 1) fail("panel resolution must be positive");
        if (std::abs(subpixel_pitch_mm * 3.0 - pixel_pitch_mm) > 1e-6)
            fail("subpixel_pitch * 3 must equal pixel_pitch");
        if (lens_count <= 0 || lens_width_mm <= 0) fail("lens_count and lens_width must be positive");
        if (std::abs(lens_count * lens_width_mm - screen_width_mm) > 0.01 * screen_width_mm)
            fail("lens_count * lens_width must match screen_width within 1%");
        if (view_count < 2) fail("view_count must be >= 2");
        if (view_width < 1 || view_height < 1) fail("view resolution must be positive");
        if (screen_width_mm <= 0 || screen_height_mm <= 0) fail("screen size must be positive");
        if (eye_span_mm < 0) fail("eye_span must be non-negative");
    }
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are rejected.
inline LfdConfig parse_display_config_text(const std::string& text) {
    LfdConfig c;
    std::map<std::string, double*> reals = {
        {"screen_width_mm", &c.screen_width_mm},       {"screen_height_mm", &c.screen_height_mm},
        {"lens_width_mm", &c.lens_width_mm},           {"pixel_pitch_mm", &c.pixel_pitch_mm},
        {"subpixel_pitch_mm", &c.subpixel_pitch_mm},   {"lens_tilt_deg", &c.lens_tilt_deg},
        {"lens_count", &c.lens_count},                 {"lens_count_ideal", &c.lens_count_ideal},
        {"viewing_distance_mm", &c.viewing_distance_mm}, {"eye_span_mm", &c.eye_span_mm},
    };
    std::map<std::string, int*> ints = {
        {"panel_width", &c.panel_width}, {"panel_height", &c.panel_height}, {"view_count", &c.view_count},
        {"view_width", &c.view_width},   {"view_height", &c.view_height},
    };
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos)
            throw Error(ErrorKind::MalformedInput, "display config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (auto it = reals.find(key); it != reals.end()) {
                *it->second = std::stod(value);
            } else if (auto jt = ints.find(key); jt != ints.end()) {
                *jt->second = std::stoi(value);
            } else {
                throw Error(ErrorKind::MalformedInput, "display config: unknown key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::MalformedInput, "display config: bad value for '" + key + "'");
        }
    }
    c.validate();
    return c;
}

inline LfdConfig load_display_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::FileNotFound, "display config not found: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_display_config_text(ss.str());
}

/// Where the display's focal (zero-parallax) rectangle sits in the scene.
struct Framing {
    Vec3 focal_center{0, 0, 0};
    double focal_width = 1.0;
    double focal_height = 0.0;  // 0: derived from the screen aspect
    double near = 1e-3;         // view-space depth range used for depth keys
    double far = 1e3;
};

struct ScreenPoint {
    double x;      // pixels, +x right
    double y;      // pixels, +y down
    double depth;  // view-space distance along -z
};

struct ViewCamera {
    int index = 0;
    Vec3 eye;
    Vec3 focal_center;
    double focal_width = 1;
    double focal_height = 1;
    double distance = 1;  // eye to focal plane
    int width = 1;
    int height = 1;
    double near = 1e-3;
    double far = 1e3;

    // Cached projection terms: px = ox + (p.x - eye.x) * sx / depth, py = oy - (p.y - eye.y) * sy / depth.
    double sx = 1, sy = 1, ox = 0, oy = 0;

    void finalize() {
        sx = distance * width / focal_width;
        sy = distance * height / focal_height;
        ox = (eye.x - focal_center.x + 0.5 * focal_width) * width / focal_width;
        oy = (focal_center.y + 0.5 * focal_height - eye.y) * height / focal_height;
    }

    /// Horizontal frustum shear (focal-center offset per unit depth).
    double shear() const { return (focal_center.x - eye.x) / distance; }

    /// Off-axis frustum bounds on the near plane, view space.
    struct Frustum { double left, right, bottom, top, near, far; };
    Frustum frustum() const {
        const double k = near / distance;
        const double cx = focal_center.x - eye.x, cy = focal_center.y - eye.y;
        return {(cx - 0.5 * focal_width) * k, (cx + 0.5 * focal_width) * k,
                (cy - 0.5 * focal_height) * k, (cy + 0.5 * focal_height) * k, near, far};
    }

    double view_depth(const Vec3& p) const { return eye.z - p.z; }

    ScreenPoint project(const Vec3& p) const {
        const double depth = eye.z - p.z;
        const double inv = 1.0 / depth;
        return {ox + (p.x - eye.x) * sx * inv, oy - (p.y - eye.y) * sy * inv, depth};
    }

    /// Point on the focal plane under pixel coordinate (px, py).
    Vec3 focal_point(double px, double py) const {
        return {focal_center.x - 0.5 * focal_width + px / width * focal_width,
                focal_center.y + 0.5 * focal_height - py / height * focal_height, focal_center.z};
    }

    /// Direction (unnormalized) of the ray from the eye through pixel coordinate (px, py).
    Vec3 pixel_ray(double px, double py) const { return focal_point(px, py) - eye; }

    Vec3 forward() const { return {0, 0, -1}; }
};

inline double focal_height_of(const LfdConfig& c, const Framing& f) {
    return f.focal_height > 0 ? f.focal_height : f.focal_width * c.screen_height_mm / c.screen_width_mm;
}

/// Camera for an arbitrary horizontal eye offset (in mm from the display axis).
inline ViewCamera make_camera(const LfdConfig& config, const Framing& framing, int index, double eye_offset_mm,
                              int width, int height) {
    if (config.viewing_distance_mm <= 0)
        throw Error(ErrorKind::InvalidConfig, "invalid framing: focal plane must lie in front of the eye line");
    if (framing.focal_width <= 0) throw Error(ErrorKind::InvalidConfig, "invalid framing: focal width must be positive");
    const double scale = framing.focal_width / config.screen_width_mm;  // world units per mm
    ViewCamera cam;
    cam.index = index;
    cam.focal_center = framing.focal_center;
    cam.focal_width = framing.focal_width;
    cam.focal_height = focal_height_of(config, framing);
    cam.distance = config.viewing_distance_mm * scale;
    cam.eye = framing.focal_center + Vec3{eye_offset_mm * scale, 0.0, cam.distance};
    cam.width = width;
    cam.height = height;
    cam.near = framing.near;
    cam.far = framing.far;
    cam.finalize();
    return cam;
}

/// Eye offset (mm) of camera v in a V-camera array evenly spanning eye_span.
inline double eye_offset_mm(const LfdConfig& config, int v, int view_count) {
    if (view_count < 2) return 0.0;
    return -0.5 * config.eye_span_mm + config.eye_span_mm * v / (view_count - 1);
}

/// V off-axis cameras evenly spaced across eye_span, view 0 at the far left.
inline std::vector<ViewCamera> build_view_array(const LfdConfig& config, const Framing& framing, int view_count,
                                                int width, int height) {
    if (view_count < 1) throw Error(ErrorKind::InvalidConfig, "view count must be >= 1");
    std::vector<ViewCamera> views;
    views.reserve(view_count);
    for (int v = 0; v < view_count; ++v)
        views.push_back(make_camera(config, framing, v, eye_offset_mm(config, v, view_count), width, height));
    return views;
}

inline std::vector<ViewCamera> build_view_array(const LfdConfig& config, const Framing& framing) {
    return build_view_array(config, framing, config.view_count, config.view_width, config.view_height);
}

struct ViewPhase {
    int view;
    double phase;  // lens phase u in [0, 1)
};

/// Slanted-lens mapping: u = frac((x_sub - tan(tilt) * y * pixel_pitch / subpixel_pitch) / L_sub), v = floor(u * V).
/// Precomputes the per-row slope so the EIA passes do not re-evaluate tan per subpixel.
class LensMapping {
public:
    explicit LensMapping(const LfdConfig& config)
        : width_(config.panel_width),
          height_(config.panel_height),
          slope_(std::tan(config.lens_tilt_deg * std::numbers::pi / 180.0) *
                 (config.pixel_pitch_mm / config.subpixel_pitch_mm)),
          lens_subpixels_(config.lens_subpixels()) {}

    double phase(int x_subpixel, int y_pixel) const {
        const double t = (x_subpixel - slope_ * y_pixel) / lens_subpixels_;
        const double u = t - std::floor(t);
        return u >= 1.0 ? 0.0 : u;
    }

    ViewPhase map(int x_subpixel, int y_pixel, int view_count) const {
        if (x_subpixel < 0 || x_subpixel >= 3 * width_ || y_pixel < 0 || y_pixel >= height_)
            throw Error(ErrorKind::IndexOutOfRange, "subpixel coordinate outside the panel");
        const double u = phase(x_subpixel, y_pixel);
        return {std::clamp(static_cast<int>(std::floor(u * view_count)), 0, view_count - 1), u};
    }

private:
    int width_;
    int height_;
    double slope_;
    double lens_subpixels_;
};

inline ViewPhase subpixel_to_view(const LfdConfig& config, int x_subpixel, int y_pixel, int view_count) {
    return LensMapping(config).map(x_subpixel, y_pixel, view_count);
}

inline ViewPhase subpixel_to_view(const LfdConfig& config, int x_subpixel, int y_pixel) {
    return subpixel_to_view(config, x_subpixel, y_pixel, config.view_count);
}

}  // namespace lfdpr
