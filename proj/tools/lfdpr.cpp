// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: `render` runs one renderer over a scene for a display and writes
// images plus reports; `compare` scores two runs against a gold-standard run.

#include <lfdpr/harness.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

int exit_code_for(const lfdpr::Error& e) {
    switch (e.kind()) {
        case lfdpr::ErrorKind::Io: return 1;
        default: return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Light field display renderer: point-based multiview splatting and reference rasterization"};
    app.require_subcommand(1);

    lfdpr::RunConfig run;
    std::string renderer = "lfdpr", recon = "none", supersample = "none", view_res, mipmap = "on";
    std::string scene, display, out;
    auto* render = app.add_subcommand("render", "render frames and write images and a report");
    render->add_option("--scene", scene, "OBJ scene (a .scene sidecar next to it is read if present)")->required();
    render->add_option("--display", display, "display configuration file")->required();
    render->add_option("--renderer", renderer, "lfdpr | mvr | gstd");
    render->add_option("--recon", recon, "none | spatial | view | view-spatial");
    render->add_option("--supersample", supersample, "none | spatial2x | view2x");
    render->add_option("--views", run.views, "view count (default: display file)");
    render->add_option("--view-res", view_res, "view resolution WxH (default: display file)");
    render->add_option("--frames", run.frames, "frames to render (timings skip the first 2 when possible)");
    render->add_option("--seed", run.seed, "seed for jittered sampling");
    render->add_option("--out", out, "output directory")->required();
    render->add_option("--workers", run.workers, "worker threads");
    render->add_option("--mipmap", mipmap, "multiview mipmapping for lfdpr: on | off");

    std::string cmp_a, cmp_b, cmp_g, cmp_out;
    auto* compare = app.add_subcommand("compare", "score two runs against a gold-standard run");
    compare->add_option("--a", cmp_a, "first run directory")->required();
    compare->add_option("--b", cmp_b, "second run directory")->required();
    compare->add_option("--gstd", cmp_g, "gold-standard run directory")->required();
    compare->add_option("--out", cmp_out, "report path (a .jsonl twin is written next to it)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*render) {
            run.scene = scene;
            run.display = display;
            run.out = out;
            run.renderer = lfdpr::parse_renderer(renderer);
            run.recon = lfdpr::parse_recon_mode(recon);
            run.supersample = lfdpr::parse_supersample(supersample);
            if (!view_res.empty()) std::tie(run.view_width, run.view_height) = lfdpr::parse_resolution(view_res);
            if (mipmap != "on" && mipmap != "off")
                throw lfdpr::Error(lfdpr::ErrorKind::InvalidConfig, "--mipmap must be on or off");
            run.mipmapping = mipmap == "on";
            const lfdpr::RunResult r = lfdpr::run(run);
            std::cout << lfdpr::format_row_table(r.row);
            return 0;
        }
        const lfdpr::Comparison c = lfdpr::compare(cmp_a, cmp_b, cmp_g);
        lfdpr::write_comparison(c, cmp_out);
        std::cout << lfdpr::format_comparison(c);
        return 0;
    } catch (const lfdpr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
