// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/commands.hpp"

#include "games/errors.hpp"
#include "games/io.hpp"
#include "games/scene.hpp"
#include "games/service.hpp"
#include "games/session.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace games {
namespace {

// Library errors map onto exit codes; anything else is a bug and propagates.
template <typename Fn>
int guarded(std::ostream &err, Fn &&fn) {
    try {
        return fn();
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kIo;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kFailure;
    }
}

std::string frameName(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%05zu.png", i);
    return buf;
}

std::vector<std::string> pngNames(const std::filesystem::path &dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("'" + dir.string() + "' is not a directory");
    std::vector<std::string> names;
    for (const auto &entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace

Vec3 parseColor(const std::string &text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const char *end = item.data() + item.size();
        const auto [ptr, ec] = std::from_chars(item.data(), end, v);
        if (ec != std::errc() || ptr != end || !(v >= 0.0 && v <= 1.0))
            throw ValidationError("colour component '" + item + "' is not a number in [0, 1]");
        parts.push_back(v);
    }
    if (parts.size() == 1)
        return Vec3::Constant(parts[0]);
    if (parts.size() == 3)
        return {parts[0], parts[1], parts[2]};
    throw ValidationError("colour '" + text + "' needs one or three components");
}

int cmdBind(const BindOptions &opt, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        TriMesh mesh = loadMeshObj(opt.mesh);
        if (opt.subdivideArea) {
            double threshold = *opt.subdivideArea;
            if (threshold <= 0.0) {
                double largest = 0.0;
                for (std::size_t f = 0; f < mesh.faces.size(); ++f)
                    largest = std::max(largest, triangleArea(mesh.triangle(f)));
                threshold = 0.5 * largest;
            }
            const std::size_t before = mesh.faces.size();
            mesh = subdivideLargeFaces(mesh, threshold);
            out << "subdivided " << before << " -> " << mesh.faces.size() << " faces (area threshold " << threshold
                << ")\n";
        }
        const BoundScene scene = bindUniform(mesh, opt.k, opt.seed, opt.shDegree);
        saveBindings(scene, opt.out);
        out << mesh.faces.size() << " faces\n" << scene.bindings.size() << " splats\n";
        return exit_code::kOk;
    });
}

int cmdExtractSoup(const ExtractSoupOptions &opt, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const SplatCloud cloud = loadSplats(opt.ply);
        std::vector<SplatGaussian> flat;
        flat.reserve(cloud.splats.size());
        for (const auto &g : cloud.splats)
            flat.push_back(isFlat(g) ? g : flatten(g));

        SoupExtraction ex;
        try {
            ex = extractSoup(flat, opt.skipDegenerate);
        } catch (const DegenerateElementsError &e) {
            const auto &idx = e.indices();
            err << "error: " << idx.size() << " degenerate splat(s); first offending indices:";
            for (std::size_t i = 0; i < std::min<std::size_t>(idx.size(), 10); ++i)
                err << " " << idx[i];
            err << "\nrerun with --skip-degenerate to drop them\n";
            return exit_code::kDegenerate;
        }
        saveSoup(ex.soup, opt.out);
        out << ex.soup.size() << " triangles\n";
        if (opt.skipDegenerate)
            out << ex.dropped.size() << " dropped\n";
        return exit_code::kOk;
    });
}

int cmdRender(const RenderCommandOptions &opt, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        Scene scene = loadScene(opt.scene);
        const std::vector<Camera> cameras = loadCameras(opt.cameras, opt.width, opt.height);
        if (opt.deform) {
            const Keyframes keys = loadKeyframes(*opt.deform);
            if (!keys.frames.empty()) {
                const DeformSpec spec = interpolate(keys, opt.time, sceneVertices(scene));
                scene = deformScene(scene, spec);
            }
        }
        const std::vector<SplatGaussian> splats = realizeScene(scene);

        std::filesystem::create_directories(opt.outDir);
        RenderOptions ro;
        ro.threads = opt.threads;
        for (std::size_t i = 0; i < cameras.size(); ++i)
            writePng(rasterize(splats, cameras[i], opt.background, ro), opt.outDir / frameName(i));
        out << "rendered " << cameras.size() << " view(s) of " << splats.size() << " splats to " << opt.outDir.string()
            << "\n";
        return exit_code::kOk;
    });
}

int cmdMetrics(const MetricsOptions &opt, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto namesA = pngNames(opt.dirA);
        const auto namesB = pngNames(opt.dirB);
        std::vector<std::string> matched;
        std::set_intersection(namesA.begin(), namesA.end(), namesB.begin(), namesB.end(),
                              std::back_inserter(matched));
        std::vector<std::string> unmatched;
        std::set_symmetric_difference(namesA.begin(), namesA.end(), namesB.begin(), namesB.end(),
                                      std::back_inserter(unmatched));
        for (const auto &name : unmatched)
            err << "warning: '" << name << "' has no counterpart; excluded\n";
        if (matched.empty()) {
            err << "error: no image names match between '" << opt.dirA.string() << "' and '" << opt.dirB.string()
                << "'\n";
            return exit_code::kNoMatches;
        }

        std::size_t nameWidth = 5;
        for (const auto &name : matched)
            nameWidth = std::max(nameWidth, name.size());

        out << std::left << std::setw(int(nameWidth)) << "image" << "  " << std::right << std::setw(8) << "PSNR"
            << "\n";
        double sum = 0.0;
        for (const auto &name : matched) {
            const ImageBuffer a = readPng(opt.dirA / name);
            const ImageBuffer b = readPng(opt.dirB / name);
            if (a.width != b.width || a.height != b.height)
                throw ValidationError("'" + name + "': image sizes differ");
            const double db = psnrForDisplay(psnr(a, b));
            sum += db;
            out << std::left << std::setw(int(nameWidth)) << name << "  " << std::right << std::setw(8) << std::fixed
                << std::setprecision(2) << db << "\n";
        }
        out << std::left << std::setw(int(nameWidth)) << "mean" << "  " << std::right << std::setw(8) << std::fixed
            << std::setprecision(2) << sum / double(matched.size()) << "\n";
        return exit_code::kOk;
    });
}

int cmdServe(const ServeOptions &opt, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        Scene scene = loadScene(opt.scene);
        Camera camera = defaultCamera(scene, opt.width, opt.height);
        if (opt.cameras) {
            const auto cams = loadCameras(*opt.cameras, opt.width, opt.height);
            if (cams.empty())
                throw ValidationError("'" + opt.cameras->string() + "' holds no cameras");
            camera = cams.front();
        }
        ServiceOptions so;
        so.host = opt.host;
        so.port = opt.port;
        so.maxUndo = maxUndoFromEnvironment();
        so.background = opt.background;
        RenderService service(std::move(scene), camera, so);
        const std::uint16_t port = service.listen();
        out << "serving " << opt.scene.string() << " on " << opt.host << ":" << port << std::endl;
        service.run();
        return exit_code::kOk;
    });
}

} // namespace games
