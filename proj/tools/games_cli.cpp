// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/commands.hpp"
#include "games/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
    using namespace games;

    CLI::App app{"games: mesh-bound Gaussian splatting tools"};
    app.require_subcommand(1);

    BindOptions bind;
    std::string subdivide;
    auto *bindCmd = app.add_subcommand("bind", "Bind k Gaussians to every face of an OBJ mesh");
    bindCmd->add_option("mesh", bind.mesh, "Input OBJ mesh")->required();
    bindCmd->add_option("k", bind.k, "Gaussians per face")->required()->check(CLI::PositiveNumber);
    bindCmd->add_option("seed", bind.seed, "Random seed")->required();
    bindCmd->add_option("out", bind.out, "Output bindings file")->required();
    bindCmd->add_option("--sh-degree", bind.shDegree, "SH degree of the created splats")->check(CLI::Range(0, 3));
    bindCmd
        ->add_option("--subdivide-area", subdivide,
                     "Subdivide faces larger than this area first; without a value, half the largest face area")
        ->expected(0, 1);

    ExtractSoupOptions extract;
    auto *extractCmd = app.add_subcommand("extract-soup", "Flatten splats and write their triangle soup");
    extractCmd->add_option("ply", extract.ply, "Input splat PLY")->required();
    extractCmd->add_option("out", extract.out, "Output soup file")->required();
    extractCmd->add_flag("--skip-degenerate", extract.skipDegenerate, "Drop degenerate splats instead of failing");

    RenderCommandOptions render;
    std::string renderBackground = "0";
    std::string deformPath;
    auto *renderCmd = app.add_subcommand("render", "Render a scene from every camera in transforms.json");
    renderCmd->add_option("scene", render.scene, "Bindings, soup or splat PLY file")->required();
    renderCmd->add_option("cameras", render.cameras, "NeRF transforms.json")->required();
    renderCmd->add_option("out_dir", render.outDir, "Output directory")->required();
    renderCmd->add_option("--width", render.width, "Image width")->check(CLI::PositiveNumber);
    renderCmd->add_option("--height", render.height, "Image height")->check(CLI::PositiveNumber);
    renderCmd->add_option("--background", renderBackground, "Background colour: grey value or r,g,b");
    renderCmd->add_option("--deform", deformPath, "Deformation or keyframe YAML");
    renderCmd->add_option("--time", render.time, "Keyframe time")->needs(renderCmd->get_option("--deform"));
    renderCmd->add_option("--threads", render.threads, "Render threads (0 = all cores)");

    MetricsOptions metrics;
    auto *metricsCmd = app.add_subcommand("metrics", "PSNR between same-named PNGs in two directories");
    metricsCmd->add_option("dir_a", metrics.dirA, "Rendered images")->required();
    metricsCmd->add_option("dir_b", metrics.dirB, "Reference images")->required();

    ServeOptions serve;
    std::string serveBackground = "0";
    std::string serveCameras;
    auto *serveCmd = app.add_subcommand("serve", "Run the editor render service");
    serveCmd->add_option("scene", serve.scene, "Bindings, soup or splat PLY file")->required();
    serveCmd->add_option("--port", serve.port, "TCP port");
    serveCmd->add_option("--host", serve.host, "Listen address");
    serveCmd->add_option("--cameras", serveCameras, "transforms.json; the first camera becomes the initial view");
    serveCmd->add_option("--width", serve.width, "Image width")->check(CLI::PositiveNumber);
    serveCmd->add_option("--height", serve.height, "Image height")->check(CLI::PositiveNumber);
    serveCmd->add_option("--background", serveBackground, "Background colour: grey value or r,g,b");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bindCmd) {
            if (bindCmd->count("--subdivide-area"))
                bind.subdivideArea = subdivide.empty() ? 0.0 : std::stod(subdivide);
            return cmdBind(bind, std::cout, std::cerr);
        }
        if (*extractCmd)
            return cmdExtractSoup(extract, std::cout, std::cerr);
        if (*renderCmd) {
            render.background = parseColor(renderBackground);
            if (!deformPath.empty())
                render.deform = deformPath;
            return cmdRender(render, std::cout, std::cerr);
        }
        if (*metricsCmd)
            return cmdMetrics(metrics, std::cout, std::cerr);
        if (*serveCmd) {
            serve.background = parseColor(serveBackground);
            if (!serveCameras.empty())
                serve.cameras = serveCameras;
            return cmdServe(serve, std::cout, std::cerr);
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::kFailure;
    } catch (const std::invalid_argument &) {
        std::cerr << "error: --subdivide-area expects a number\n";
        return exit_code::kFailure;
    }
    return exit_code::kFailure;
}
