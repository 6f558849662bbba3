// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end runs: load and prepare a scene for a display, render frames with one of the
// renderers, build the EIA, time the stages and write images and reports. `compare` scores
// two runs against a gold-standard run.

#pragma once

#include <lfdpr/eia.hpp>
#include <lfdpr/error.hpp>
#include <lfdpr/image.hpp>
#include <lfdpr/lfd_model.hpp>
#include <lfdpr/metrics.hpp>
#include <lfdpr/mvr_render.hpp>
#include <lfdpr/pointgen.hpp>
#include <lfdpr/rng.hpp>
#include <lfdpr/scene.hpp>
#include <lfdpr/splat_render.hpp>

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lfdpr {

enum class Renderer { Lfdpr, Mvr, Gstd };
enum class Supersample { None, Spatial2x, View2x };

inline const char* to_string(Renderer r) {
    switch (r) {
        case Renderer::Lfdpr: return "lfdpr";
        case Renderer::Mvr: return "mvr";
        case Renderer::Gstd: return "gstd";
    }
    return "?";
}

inline const char* to_string(Supersample s) {
    switch (s) {
        case Supersample::None: return "none";
        case Supersample::Spatial2x: return "spatial2x";
        case Supersample::View2x: return "view2x";
    }
    return "?";
}

inline Renderer parse_renderer(const std::string& s) {
    if (s == "lfdpr") return Renderer::Lfdpr;
    if (s == "mvr") return Renderer::Mvr;
    if (s == "gstd") return Renderer::Gstd;
    throw Error(ErrorKind::InvalidConfig, "unknown renderer '" + s + "' (expected lfdpr, mvr or gstd)");
}

inline Supersample parse_supersample(const std::string& s) {
    if (s == "none") return Supersample::None;
    if (s == "spatial2x") return Supersample::Spatial2x;
    if (s == "view2x") return Supersample::View2x;
    throw Error(ErrorKind::InvalidConfig, "unknown supersample mode '" + s + "' (expected none, spatial2x or view2x)");
}

/// A scene tessellated and framed for one display configuration. Geometry is identical for
/// every renderer, so comparisons measure rendering only.
struct PreparedScene {
    std::string name;
    Scene scene;
    SceneSettings settings;
    LfdConfig display;
    Framing framing;
    ShadingContext shading;
    std::size_t source_triangles = 0;
};

inline Framing framing_for(const Scene& scene, const SceneSettings& settings, const LfdConfig& display) {
    const auto b = scene.mesh.bounds();
    const Vec3 centre = (b.min + b.max) * 0.5;
    const Vec3 ext = b.max - b.min;
    Framing f;
    f.focal_center = settings.focal_center.value_or(Vec3{centre.x, centre.y, b.max.z - 0.5 * ext.z});
    f.focal_width = settings.focal_width.value_or(std::max(ext.x, ext.y * display.screen_width_mm / display.screen_height_mm) * 1.05);
    f.focal_height = settings.focal_height.value_or(0.0);
    const double distance = display.viewing_distance_mm * f.focal_width / display.screen_width_mm;
    const double diag = std::max(length(ext), 1e-9);
    f.near = std::max(1e-6, 1e-3 * distance);
    f.far = distance + std::abs(f.focal_center.z - b.min.z) + 2.0 * diag;
    return f;
}

inline PreparedScene prepare_scene(const std::filesystem::path& scene_path, const LfdConfig& display,
                                   bool subdivide = true) {
    display.validate();
    PreparedScene p;
    p.name = scene_path.stem().string();
    p.scene = load_scene(scene_path);
    auto sidecar = scene_path;
    sidecar.replace_extension(".scene");
    p.settings = load_scene_settings(sidecar);
    if (!p.settings.pivot_set) {
        const auto b = p.scene.mesh.bounds();
        p.settings.animation.pivot = (b.min + b.max) * 0.5;
    }
    p.display = display;
    p.framing = framing_for(p.scene, p.settings, display);
    p.shading.light_direction = normalize(p.settings.light_direction);
    p.shading.light_color = p.settings.light_color;
    p.shading.ambient = p.settings.ambient;
    p.source_triangles = p.scene.mesh.triangles.size();
    if (subdivide) {
        const auto cams = build_view_array(display, p.framing);
        p.scene.mesh = tessellate(p.scene.mesh, cams, p.settings.max_pixels);
    }
    return p;
}

struct FrameOptions {
    Renderer renderer = Renderer::Lfdpr;
    ReconMode recon = ReconMode::None;
    Supersample supersample = Supersample::None;
    bool mipmapping = true;
    int workers = 1;
    std::uint64_t seed = 0;
    bool keep_buffers = false;
    bool audit_weights = false;
    RasterConfig gold;  // gold-standard parameters
};

struct FrameOutput {
    std::vector<Image8> views;        // comparison resolution
    std::vector<ViewBuffer> buffers;  // render resolution, when kept
    std::vector<ViewCamera> cameras;
    Image8 eia;
    Image8 center;
    Mask center_mask;  // written pixels of the center buffer (not for the gold standard)
    double pointgen_s = 0, viewgen_s = 0, eia_s = 0;
    std::uint64_t points = 0;
    std::uint64_t triangle_stage = 0;
    std::uint64_t triangles = 0;
    std::size_t buffer_bytes = 0;
    PointGenStats pointgen;
    WeightAudit audit;
};

/// Cameras for a frame: V views, or 2V views jittered within half view intervals.
inline std::vector<ViewCamera> frame_cameras(const PreparedScene& p, const FrameOptions& o, int width, int height) {
    const LfdConfig& d = p.display;
    if (o.supersample != Supersample::View2x) return build_view_array(d, p.framing, d.view_count, width, height);
    const int V = d.view_count;
    const double interval = d.eye_span_mm / (V - 1);
    const CounterRng rng(o.seed, 0x7669657732ull);
    std::vector<ViewCamera> cams;
    cams.reserve(2 * V);
    for (int k = 0; k < 2 * V; ++k) {
        const double base = eye_offset_mm(d, k / 2, V) + ((k % 2) - 0.5) * 0.5 * interval;
        const double jitter = (rng.uniform(static_cast<std::uint64_t>(k)) - 0.5) * 0.25 * interval;
        cams.push_back(make_camera(d, p.framing, k, base + jitter, width, height));
    }
    return cams;
}

inline FrameOutput render_frame(const PreparedScene& p, const FrameOptions& o, long long frame) {
    using clock = std::chrono::steady_clock;
    auto secs = [](clock::time_point a, clock::time_point b) { return std::chrono::duration<double>(b - a).count(); };
    const LfdConfig& d = p.display;
    FrameOutput out;
    const TriangleMesh mesh = advance_frame(p.scene.mesh, p.settings.animation, frame);
    out.triangles = mesh.triangles.size();

    if (o.renderer == Renderer::Gstd) {
        const auto t0 = clock::now();
        const auto table = build_triangle_table(mesh, o.workers);
        RasterConfig rc = o.gold;
        rc.workers = o.workers;
        rc.seed = o.seed;
        GoldStandard g = render_gold_standard(table, p.scene.materials, p.scene.textures, d, p.framing, p.shading, rc);
        out.viewgen_s = secs(t0, clock::now());
        out.views = std::move(g.views);
        out.eia = std::move(g.eia);
        out.center = std::move(g.single_view);
        out.triangle_stage = g.stats.triangle_stage;
        return out;
    }

    const bool spatial2x = o.supersample == Supersample::Spatial2x;
    const int rw = spatial2x ? 2 * d.view_width : d.view_width;
    const int rh = spatial2x ? 2 * d.view_height : d.view_height;
    out.cameras = frame_cameras(p, o, rw, rh);

    std::vector<ViewBuffer> buffers;
    if (o.renderer == Renderer::Lfdpr) {
        const auto t0 = clock::now();
        EmitOptions eo;
        eo.mipmapping = o.mipmapping;
        const PointCloud cloud = generate_points(mesh, p.scene.materials, p.scene.textures, out.cameras, eo, o.workers,
                                                 &out.pointgen);
        const auto t1 = clock::now();
        SplatOptions so;
        so.workers = o.workers;
        buffers = render_views(cloud, out.cameras, p.shading, so);
        out.views.reserve(buffers.size());
        for (const auto& b : buffers) out.views.push_back(resolve_color(b));
        const auto t2 = clock::now();
        out.pointgen_s = secs(t0, t1);
        out.viewgen_s = secs(t1, t2);
        out.points = cloud.points.size();
        out.triangle_stage = out.pointgen.triangle_stage;
    } else {
        const auto t0 = clock::now();
        const auto table = build_triangle_table(mesh, o.workers);
        RasterConfig rc;
        rc.workers = o.workers;
        RasterStats rs;
        buffers = render_mvr(table, p.scene.materials, p.scene.textures, out.cameras, p.shading, rc, &rs);
        out.views.reserve(buffers.size());
        for (const auto& b : buffers) out.views.push_back(resolve_color(b));
        out.viewgen_s = secs(t0, clock::now());
        out.triangle_stage = rs.triangle_stage;
    }
    for (const auto& b : buffers) out.buffer_bytes += b.byte_size();
    out.center_mask = coverage_mask(buffers[buffers.size() / 2]);

    const auto t3 = clock::now();
    if (spatial2x)
        for (auto& v : out.views) v = downsample_supersampled(v);
    ReconstructionConfig recon;
    recon.mode = o.recon;
    recon.seed = o.seed;
    out.eia = interleave(out.views, d, recon, o.workers, o.audit_weights ? &out.audit : nullptr);
    out.eia_s = secs(t3, clock::now());
    out.center = out.views[out.views.size() / 2];
    if (o.keep_buffers) out.buffers = std::move(buffers);
    return out;
}

struct RunConfig {
    std::filesystem::path scene;
    std::filesystem::path display;
    Renderer renderer = Renderer::Lfdpr;
    ReconMode recon = ReconMode::None;
    Supersample supersample = Supersample::None;
    int views = 0;        // 0: display file value
    int view_width = 0;   // 0: display file value
    int view_height = 0;
    int frames = 10;
    int warmup = 2;
    std::uint64_t seed = 0;
    std::filesystem::path out;
    int workers = 1;
    bool mipmapping = true;

    void validate() const {
        auto fail = [](ErrorKind k, const std::string& m) { throw Error(k, m); };
        if (scene.empty()) fail(ErrorKind::InvalidConfig, "--scene is required");
        if (!std::filesystem::exists(scene)) fail(ErrorKind::FileNotFound, "scene file not found: " + scene.string());
        if (display.empty()) fail(ErrorKind::InvalidConfig, "--display is required");
        if (!std::filesystem::exists(display))
            fail(ErrorKind::FileNotFound, "display config not found: " + display.string());
        if (frames < 1) fail(ErrorKind::InvalidConfig, "--frames must be at least 1");
        if (warmup < 0) fail(ErrorKind::InvalidConfig, "warmup frame count must be non-negative");
        if (views != 0 && views < 2) fail(ErrorKind::InvalidConfig, "--views must be at least 2");
        if ((view_width != 0 || view_height != 0) && (view_width < 1 || view_height < 1))
            fail(ErrorKind::InvalidConfig, "--view-res must be WxH with positive sizes");
        if (workers < 1) fail(ErrorKind::InvalidConfig, "--workers must be at least 1");
        if (out.empty()) fail(ErrorKind::InvalidConfig, "--out is required");
    }

    LfdConfig display_config() const {
        LfdConfig d = load_display_config(display.string());
        if (views) d.view_count = views;
        if (view_width) d.view_width = view_width;
        if (view_height) d.view_height = view_height;
        d.validate();
        return d;
    }
};

/// Parses "WxH".
inline std::pair<int, int> parse_resolution(const std::string& s) {
    const auto x = s.find_first_of("xX");
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        std::size_t u1 = 0, u2 = 0;
        const int w = std::stoi(s.substr(0, x), &u1);
        const int h = std::stoi(s.substr(x + 1), &u2);
        if (u1 != x || u2 != s.size() - x - 1 || w < 1 || h < 1) throw std::invalid_argument(s);
        return {w, h};
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidConfig, "resolution must look like 480x360, got '" + s + "'");
    }
}

struct BenchmarkRow {
    std::string scene;
    std::string renderer;
    std::string recon;
    std::string supersample;
    bool mipmapping = true;
    int views = 0;
    int view_width = 0, view_height = 0;
    int frames = 0;
    int timed_frames = 0;
    std::uint64_t seed = 0;
    std::uint64_t triangles = 0;
    std::uint64_t points = 0;
    std::uint64_t triangle_stage = 0;
    std::size_t buffer_bytes = 0;
    double pointgen_ms = 0, viewgen_ms = 0, eia_ms = 0, total_ms = 0;
    std::array<std::uint64_t, 17> histogram{};
    int panel_width = 0, panel_height = 0;
};

inline nlohmann::json to_json(const BenchmarkRow& r) {
    nlohmann::json j;
    j["scene"] = r.scene;
    j["renderer"] = r.renderer;
    j["recon"] = r.recon;
    j["supersample"] = r.supersample;
    j["mipmapping"] = r.mipmapping;
    j["views"] = r.views;
    j["view_width"] = r.view_width;
    j["view_height"] = r.view_height;
    j["panel_width"] = r.panel_width;
    j["panel_height"] = r.panel_height;
    j["frames"] = r.frames;
    j["timed_frames"] = r.timed_frames;
    j["seed"] = r.seed;
    j["triangles"] = r.triangles;
    j["points"] = r.points;
    j["geometry_invocations"] = r.triangle_stage;
    j["buffer_bytes"] = r.buffer_bytes;
    j["pointgen_ms"] = r.pointgen_ms;
    j["viewgen_ms"] = r.viewgen_ms;
    j["eia_ms"] = r.eia_ms;
    j["total_ms"] = r.total_ms;
    j["points_per_triangle_log2_histogram"] = r.histogram;
    return j;
}

inline std::string format_row_table(const BenchmarkRow& r) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2);
    s << "scene            " << r.scene << "\n";
    s << "renderer         " << r.renderer << " (recon " << r.recon << ", supersample " << r.supersample
      << ", mipmapping " << (r.mipmapping ? "on" : "off") << ")\n";
    s << "views            " << r.views << " at " << r.view_width << "x" << r.view_height << "\n";
    s << "frames           " << r.frames << " (" << r.timed_frames << " timed)\n";
    s << "triangles        " << r.triangles << "\n";
    s << "points           " << r.points << "\n";
    s << "geometry calls   " << r.triangle_stage << "\n";
    s << "buffer bytes     " << r.buffer_bytes << " (" << r.buffer_bytes / 1.0e6 << " MB)\n";
    s << "\n";
    s << "| pt gen (ms) | view gen (ms) | EIA constr (ms) | tot time (ms) |\n";
    s << "|------------:|--------------:|----------------:|--------------:|\n";
    s << "| " << std::setw(11) << r.pointgen_ms << " | " << std::setw(13) << r.viewgen_ms << " | " << std::setw(15)
      << r.eia_ms << " | " << std::setw(13) << r.total_ms << " |\n";
    return s.str();
}

struct RunResult {
    BenchmarkRow row;
    FrameOutput first;  // frame 0 outputs
};

/// Renders all frames; stage times are averaged over the frames after the warmup frames
/// (all frames when there are no more than `warmup`). Images come from frame 0.
inline RunResult run(const RunConfig& config, const PreparedScene* prepared = nullptr) {
    config.validate();
    PreparedScene local;
    if (!prepared) {
        local = prepare_scene(config.scene, config.display_config());
        prepared = &local;
    }
    FrameOptions o;
    o.renderer = config.renderer;
    o.recon = config.recon;
    o.supersample = config.supersample;
    o.mipmapping = config.mipmapping;
    o.workers = config.workers;
    o.seed = config.seed;

    RunResult r;
    const int skip = config.frames > config.warmup ? config.warmup : 0;
    double pg = 0, vg = 0, ea = 0;
    std::uint64_t points = 0;
    for (int k = 0; k < config.frames; ++k) {
        FrameOutput f = render_frame(*prepared, o, k);
        if (k >= skip) {
            pg += f.pointgen_s;
            vg += f.viewgen_s;
            ea += f.eia_s;
            points += f.points;
        }
        if (k == 0) r.first = std::move(f);
    }
    const int timed = config.frames - skip;
    const LfdConfig& d = prepared->display;
    BenchmarkRow& row = r.row;
    row.scene = prepared->name;
    row.renderer = to_string(config.renderer);
    row.recon = to_string(config.recon);
    row.supersample = to_string(config.supersample);
    row.mipmapping = config.mipmapping;
    row.views = d.view_count;
    row.view_width = d.view_width;
    row.view_height = d.view_height;
    row.panel_width = d.panel_width;
    row.panel_height = d.panel_height;
    row.frames = config.frames;
    row.timed_frames = timed;
    row.seed = config.seed;
    row.triangles = r.first.triangles;
    row.points = timed > 0 ? points / static_cast<std::uint64_t>(timed) : 0;
    row.triangle_stage = r.first.triangle_stage;
    row.buffer_bytes = r.first.buffer_bytes;
    row.pointgen_ms = 1e3 * pg / timed;
    row.viewgen_ms = 1e3 * vg / timed;
    row.eia_ms = 1e3 * ea / timed;
    row.total_ms = row.pointgen_ms + row.viewgen_ms + row.eia_ms;
    row.histogram = r.first.pointgen.histogram;

    if (!config.out.empty()) {
        std::filesystem::create_directories(config.out);
        write_png(config.out / "eia.png", r.first.eia);
        write_png(config.out / "view_center.png", r.first.center);
        if (!r.first.views.empty()) {
            write_png(config.out / "view_first.png", r.first.views.front());
            write_png(config.out / "view_last.png", r.first.views.back());
        }
        if (!r.first.center_mask.data.empty()) {
            Image8 m(r.first.center_mask.width, r.first.center_mask.height, 1);
            for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = r.first.center_mask.data[i] ? 255 : 0;
            write_png(config.out / "mask_center.png", m);
        }
        std::ofstream(config.out / "report.txt") << format_row_table(row);
        std::ofstream(config.out / "report.jsonl") << to_json(row).dump() << "\n";
    }
    return r;
}

struct ComparisonRow {
    std::string name;
    QualityReport eia;
    QualityReport single_view;
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    nlohmann::json a_meta, b_meta, gstd_meta;
    std::optional<double> coverage_ab;  // center-view coverage agreement (erode 1) of a and b
};

namespace detail {

inline nlohmann::json read_report(const std::filesystem::path& dir) {
    const auto path = dir / "report.jsonl";
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::FileNotFound, "no run report at " + path.string());
    std::string line;
    std::getline(in, line);
    try {
        return nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedInput, "unreadable run report " + path.string() + ": " + e.what());
    }
}

inline void require_compatible(const nlohmann::json& a, const nlohmann::json& b, const std::string& what) {
    for (const char* key : {"panel_width", "panel_height", "view_width", "view_height"})
        if (a.at(key) != b.at(key))
            throw Error(ErrorKind::DimensionMismatch, "incompatible runs (" + what + "): " + key + " " +
                                                          a.at(key).dump() + " vs " + b.at(key).dump());
    if (a.at("scene") != b.at("scene"))
        throw Error(ErrorKind::InvalidConfig, "incompatible runs (" + what + "): different scenes");
}

}  // namespace detail

/// Scores runs a and b against a gold-standard run at EIA level and on the single center view.
inline Comparison compare(const std::filesystem::path& a, const std::filesystem::path& b,
                          const std::filesystem::path& gstd) {
    Comparison c;
    c.a_meta = detail::read_report(a);
    c.b_meta = detail::read_report(b);
    c.gstd_meta = detail::read_report(gstd);
    detail::require_compatible(c.a_meta, c.gstd_meta, "a vs gstd");
    detail::require_compatible(c.b_meta, c.gstd_meta, "b vs gstd");
    const Image8 ea = read_png(a / "eia.png"), eb = read_png(b / "eia.png"), eg = read_png(gstd / "eia.png");
    const Image8 va = read_png(a / "view_center.png"), vb = read_png(b / "view_center.png"),
                 vg = read_png(gstd / "view_center.png");
    auto row = [](std::string name, const Image8& e1, const Image8& e2, const Image8& v1, const Image8& v2) {
        return ComparisonRow{std::move(name), compare_images(e1, e2), compare_images(v1, v2)};
    };
    c.rows.push_back(row("a vs gstd", ea, eg, va, vg));
    c.rows.push_back(row("b vs gstd", eb, eg, vb, vg));
    c.rows.push_back(row("a vs b", ea, eb, va, vb));
    if (std::filesystem::exists(a / "mask_center.png") && std::filesystem::exists(b / "mask_center.png")) {
        auto mask = [](const Image8& img) {
            Mask m{img.width, img.height, std::vector<std::uint8_t>(img.data.size())};
            for (std::size_t i = 0; i < img.data.size(); ++i) m.data[i] = img.data[i] > 127;
            return m;
        };
        c.coverage_ab = coverage_agreement(mask(read_png(a / "mask_center.png")), mask(read_png(b / "mask_center.png")), 1);
        c.rows.back().single_view.coverage_agreement = *c.coverage_ab;
    }
    return c;
}

inline std::string format_comparison(const Comparison& c) {
    std::ostringstream s;
    s << "a: " << c.a_meta.value("renderer", "?") << "  b: " << c.b_meta.value("renderer", "?")
      << "  reference: " << c.gstd_meta.value("renderer", "?") << "  scene: " << c.a_meta.value("scene", "?") << "\n\n";
    s << "| pair       | RMSE EIA (view) | SSIM EIA (view) |\n";
    s << "|------------|-----------------|-----------------|\n";
    s << std::fixed;
    for (const auto& r : c.rows) {
        std::ostringstream rm, ss;
        rm << std::fixed << std::setprecision(2) << r.eia.rmse << " (" << r.single_view.rmse << ")";
        ss << std::fixed << std::setprecision(3) << r.eia.ssim << " (" << r.single_view.ssim << ")";
        s << "| " << std::left << std::setw(10) << r.name << " | " << std::setw(15) << rm.str() << " | "
          << std::setw(15) << ss.str() << " |\n";
    }
    if (c.coverage_ab) s << "\ncenter-view coverage agreement a vs b (erode 1): " << std::setprecision(5) << *c.coverage_ab << "\n";
    return s.str();
}

inline void write_comparison(const Comparison& c, const std::filesystem::path& out) {
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    std::ofstream(out) << format_comparison(c);
    auto jsonl = out;
    jsonl += ".jsonl";
    std::ofstream j(jsonl);
    for (const auto& r : c.rows) {
        nlohmann::json rec;
        rec["pair"] = r.name;
        rec["rmse_eia"] = r.eia.rmse;
        rec["ssim_eia"] = r.eia.ssim;
        rec["rmse_view"] = r.single_view.rmse;
        rec["ssim_view"] = r.single_view.ssim;
        if (r.name == "a vs b" && c.coverage_ab) rec["coverage_view"] = *c.coverage_ab;
        j << rec.dump() << "\n";
    }
}

}  // namespace lfdpr
