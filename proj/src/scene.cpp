// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/scene.hpp"

#include "games/errors.hpp"
#include "games/io.hpp"

#include <algorithm>

namespace games {

Scene loadScene(const std::filesystem::path &path) {
    const Bytes bytes = readFileBytes(path);
    const std::string_view head(reinterpret_cast<const char *>(bytes.data()), std::min<std::size_t>(bytes.size(), 8));
    if (head == kBindingsMagic)
        return decodeBindings(bytes);
    if (head == kSoupMagic)
        return decodeSoup(bytes);
    if (head.starts_with("ply\n"))
        return decodeSplatPly(bytes).splats;
    throw FormatError(FormatError::Kind::BadMagic,
                      "'" + path.string() + "' is not a bindings, soup or splat ply file", 0);
}

std::string sceneKindName(const Scene &scene) {
    switch (scene.index()) {
    case 0: return "bound-mesh";
    case 1: return "soup";
    default: return "splats";
    }
}

std::vector<SplatGaussian> realizeScene(const Scene &scene) {
    if (const auto *b = std::get_if<BoundScene>(&scene))
        return realizeAll(*b);
    if (const auto *s = std::get_if<TriangleSoup>(&scene))
        return realizeSoup(*s);
    return std::get<std::vector<SplatGaussian>>(scene);
}

std::size_t splatCount(const Scene &scene) {
    if (const auto *b = std::get_if<BoundScene>(&scene))
        return b->bindings.size();
    if (const auto *s = std::get_if<TriangleSoup>(&scene))
        return s->size();
    return std::get<std::vector<SplatGaussian>>(scene).size();
}

std::vector<Vec3> sceneVertices(const Scene &scene) {
    if (const auto *b = std::get_if<BoundScene>(&scene))
        return b->mesh.vertices;
    if (const auto *s = std::get_if<TriangleSoup>(&scene))
        return soupVertices(*s);
    return {};
}

Scene deformScene(const Scene &scene, const DeformSpec &spec) {
    if (const auto *b = std::get_if<BoundScene>(&scene))
        return applyDeform(*b, spec);
    if (const auto *s = std::get_if<TriangleSoup>(&scene))
        return applyDeform(*s, spec);
    if (spec.steps.empty())
        return scene;
    throw ValidationError("plain splat scenes have no vertices to edit; extract a triangle soup first");
}

TriangleSoup soupFromSplats(std::span<const SplatGaussian> splats, std::size_t *dropped) {
    std::vector<SplatGaussian> flat;
    flat.reserve(splats.size());
    for (const auto &g : splats)
        flat.push_back(isFlat(g) ? g : flatten(g));
    SoupExtraction ex = extractSoup(flat, true);
    if (dropped)
        *dropped = ex.dropped.size();
    return std::move(ex.soup);
}

Camera defaultCamera(const Scene &scene, int width, int height) {
    std::vector<Vec3> points = sceneVertices(scene);
    if (points.empty())
        for (const auto &g : realizeScene(scene))
            points.push_back(g.mean);

    Vec3 lo = Vec3::Constant(-1.0), hi = Vec3::Constant(1.0);
    if (!points.empty()) {
        lo = hi = points.front();
        for (const Vec3 &p : points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
    }
    const Vec3 centre = 0.5 * (lo + hi);
    const double radius = std::max(0.5 * (hi - lo).norm(), 1e-3);
    const double focal = double(std::max(width, height));
    // Focal = image size gives a ~53 degree field of view; 2.5 radii fits the sphere.
    Camera cam = Camera::lookAt(centre - Vec3(0.0, 0.0, 2.5 * radius), centre, Vec3::UnitY(), focal, width,
                                height);
    cam.near = std::max(1e-3, 0.01 * radius);
    cam.far = 100.0 * radius;
    return cam;
}

} // namespace games
