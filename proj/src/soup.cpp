// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/soup.hpp"

#include "games/errors.hpp"
#include "games/face_param.hpp"

namespace games {

OrientedTriangle gaussianToTriangle(const SplatGaussian &g) {
    if (!isFlat(g))
        throw ValidationError("soup extraction needs a flat Gaussian (scale[0] == epsilon)");
    const double minExtent = kSoupMinExtentFactor * kFlatEpsilon;
    if (!(g.scale(1) > minExtent) || !(g.scale(2) > minExtent))
        throw GeometryError("flat Gaussian is too thin to span a triangle");

    const Mat3 r = quatToMatrix(g.rotation);
    return {g.mean, g.mean + g.scale(1) * r.col(1), g.mean + g.scale(2) * r.col(2)};
}

SplatGaussian triangleToGaussian(const OrientedTriangle &t, const SoupAttributes &attrs) {
    const Vec3 r1 = faceNormal(t);
    const Vec3 edge = t.v2 - t.v1;
    const double s2 = edge.norm();
    const Vec3 r2 = edge / s2;
    const Vec3 rest = orth(t.v3 - t.v1, r1, r2);
    Vec3 r3 = rest / rest.norm();
    double s3 = (t.v3 - t.v1).dot(r3);
    if (s3 < 0.0) {
        r3 = -r3;
        s3 = -s3;
    }

    Mat3 basis;
    basis << r1, r2, r3;
    if (basis.determinant() < 0.0)
        basis.col(0) = -r1;

    SplatGaussian g;
    g.mean = t.v1;
    g.rotation = matrixToQuat(basis);
    g.scale = Vec3(kFlatEpsilon, s2, s3);
    g.opacity = attrs.opacity;
    g.sh = attrs.sh;
    return g;
}

SoupExtraction extractSoup(std::span<const SplatGaussian> gaussians, bool skipDegenerate) {
    SoupExtraction out;
    out.soup.triangles.reserve(gaussians.size());
    out.soup.attrs.reserve(gaussians.size());

    std::vector<std::size_t> degenerate;
    for (std::size_t i = 0; i < gaussians.size(); ++i) {
        const SplatGaussian &g = gaussians[i];
        if (!isFlat(g))
            throw ValidationError("splat " + std::to_string(i) + " is not flat; flatten before extraction");
        OrientedTriangle t;
        try {
            t = gaussianToTriangle(g);
        } catch (const GeometryError &) {
            degenerate.push_back(i);
            continue;
        }
        if (isDegenerate(t)) {
            degenerate.push_back(i);
            continue;
        }
        out.soup.triangles.push_back(t);
        out.soup.attrs.push_back({g.opacity, g.sh});
    }

    if (!degenerate.empty() && !skipDegenerate)
        throw DegenerateElementsError("degenerate splats cannot become soup triangles", std::move(degenerate));
    out.dropped = std::move(degenerate);
    return out;
}

std::vector<SplatGaussian> realizeSoup(const TriangleSoup &soup) {
    validateSoup(soup);
    std::vector<SplatGaussian> out;
    out.reserve(soup.size());
    for (std::size_t i = 0; i < soup.size(); ++i) {
        try {
            out.push_back(triangleToGaussian(soup.triangles[i], soup.attrs[i]));
        } catch (const GeometryError &e) {
            throw GeometryError(e.what(), i);
        }
    }
    return out;
}

void validateSoup(const TriangleSoup &soup) {
    if (soup.triangles.size() != soup.attrs.size())
        throw ValidationError("soup has " + std::to_string(soup.triangles.size()) + " triangles but " +
                              std::to_string(soup.attrs.size()) + " attribute records");
}

} // namespace games
