// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/face_param.hpp"

#include "games/errors.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace games {

namespace {

Vec3 project(const Vec3 &v, const Vec3 &u) { return (v.dot(u) / u.dot(u)) * u; }

// 53-bit uniform in [0,1) straight from the engine bits, so sequences do not
// depend on the standard library's distribution implementation.
double uniform01(std::mt19937_64 &rng) { return double(rng() >> 11) * 0x1.0p-53; }

} // namespace

Vec3 faceCentroid(const OrientedTriangle &t) { return (t.v1 + t.v2 + t.v3) / 3.0; }

Vec3 faceNormal(const OrientedTriangle &t) {
    const Vec3 c = edgeCross(t);
    if (!(c.squaredNorm() > kDegenerateCross2))
        throw GeometryError("degenerate triangle has no normal");
    return c / c.norm();
}

Vec3 orth(const Vec3 &x, const Vec3 &r1, const Vec3 &r2) {
    const Vec3 rest = x - project(x, r1) - project(x, r2);
    if (!(rest.norm() >= 1e-12))
        throw GeometryError("orth: vector lies in span of the basis pair");
    return rest;
}

Mat3 faceBasis(const OrientedTriangle &t) {
    const Vec3 m = faceCentroid(t);
    const Vec3 r1 = faceNormal(t);
    const Vec3 toV1 = t.v1 - m;
    const Vec3 r2 = toV1 / toV1.norm();
    const Vec3 rest = orth(t.v2 - m, r1, r2);
    Vec3 r3 = rest / rest.norm();

    Mat3 basis;
    basis << r1, r2, r3;
    if (basis.determinant() < 0.0)
        basis.col(2) = -r3;
    return basis;
}

Vec3 faceScales(const OrientedTriangle &t) {
    const Mat3 basis = faceBasis(t);
    const Vec3 m = faceCentroid(t);
    return {kFlatEpsilon, (m - t.v1).norm(), std::abs((t.v2 - m).dot(basis.col(2)))};
}

void validateBinding(const FaceBinding &b) {
    if ((b.alphas.array() < 0.0).any() || std::abs(b.alphas.sum() - 1.0) > 1e-9)
        throw ValidationError("binding alphas must be non-negative and sum to 1");
    if (!(b.rho > 0.0) || !std::isfinite(b.rho))
        throw ValidationError("binding rho must be positive");
    if (!(b.opacity >= 0.0 && b.opacity <= 1.0))
        throw ValidationError("binding opacity outside [0,1]");
}

Vec3 bindMean(const OrientedTriangle &t, const Vec3 &alphas) {
    if ((alphas.array() < 0.0).any() || std::abs(alphas.sum() - 1.0) > 1e-9)
        throw ValidationError("barycentric weights must be non-negative and sum to 1");
    return alphas(0) * t.v1 + alphas(1) * t.v2 + alphas(2) * t.v3;
}

SplatGaussian realize(const TriMesh &mesh, const FaceBinding &b) {
    validateBinding(b);
    if (b.faceIndex >= mesh.faces.size())
        throw ValidationError("binding references face " + std::to_string(b.faceIndex) + " of " +
                              std::to_string(mesh.faces.size()));
    const OrientedTriangle t = mesh.triangle(b.faceIndex);
    if (isDegenerate(t))
        throw GeometryError("cannot realise a Gaussian on a degenerate face", b.faceIndex);

    SplatGaussian g;
    try {
        g.mean = bindMean(t, b.alphas);
        g.rotation = matrixToQuat(faceBasis(t));
        g.scale = std::sqrt(b.rho) * faceScales(t);
    } catch (const GeometryError &e) {
        throw GeometryError(e.what(), b.faceIndex);
    }
    g.opacity = b.opacity;
    g.sh = b.sh;
    return g;
}

std::vector<SplatGaussian> realizeAll(const BoundScene &scene) {
    std::vector<SplatGaussian> out;
    out.reserve(scene.bindings.size());
    for (const FaceBinding &b : scene.bindings)
        out.push_back(realize(scene.mesh, b));
    return out;
}

BoundScene bindUniform(const TriMesh &mesh, std::uint32_t k, std::uint64_t seed, int shDegree) {
    if (k == 0)
        throw ValidationError("bindUniform: k must be positive");
    validateMesh(mesh);

    BoundScene scene;
    scene.mesh = mesh;
    scene.bindings.reserve(mesh.faces.size() * k);

    const SphericalHarmonics grey = SphericalHarmonics::withDegree(shDegree);
    std::mt19937_64 rng(seed);
    for (std::uint32_t f = 0; f < mesh.faces.size(); ++f) {
        for (std::uint32_t i = 0; i < k; ++i) {
            // Gaps between two sorted uniforms: symmetric Dirichlet(1,1,1).
            double a = uniform01(rng);
            double b = uniform01(rng);
            if (b < a)
                std::swap(a, b);
            FaceBinding binding;
            binding.faceIndex = f;
            binding.alphas = Vec3(a, b - a, 1.0 - b);
            binding.rho = 1.0;
            binding.opacity = 1.0;
            binding.sh = grey;
            scene.bindings.push_back(std::move(binding));
        }
    }
    return scene;
}

} // namespace games
