// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "games/types.hpp"

#include <cstdint>
#include <vector>

namespace games {

/// Attachment of one Gaussian to a mesh face. The mean is the barycentric
/// combination of the face vertices; rotation and scale follow the face shape,
/// with the covariance multiplied by rho.
struct FaceBinding {
    std::uint32_t faceIndex = 0;
    Vec3 alphas = Vec3::Constant(1.0 / 3.0);
    double rho = 1.0;
    double opacity = 1.0;
    SphericalHarmonics sh;

    bool operator==(const FaceBinding &) const = default;
};

/// A mesh plus the Gaussians bound to its faces. Gaussians are never stored;
/// they are realised from the current vertex positions on demand.
struct BoundScene {
    TriMesh mesh;
    std::vector<FaceBinding> bindings;

    bool operator==(const BoundScene &) const = default;
};

Vec3 faceCentroid(const OrientedTriangle &t);

/// Unit normal following the right-hand rule over (v1, v2, v3).
/// Throws GeometryError for degenerate triangles.
Vec3 faceNormal(const OrientedTriangle &t);

/// Single Gram–Schmidt step: x minus its projections on r1 and r2. Throws
/// GeometryError when the remainder vanishes (x in span{r1, r2}).
Vec3 orth(const Vec3 &x, const Vec3 &r1, const Vec3 &r2);

/// Face-aligned rotation [n, (v1−m)/‖v1−m‖, r3] where r3 is the normalised
/// orthogonal remainder of v2−m; r3 is negated if needed so det = +1.
Mat3 faceBasis(const OrientedTriangle &t);

/// (ε, ‖m−v1‖, |⟨v2−m, r3⟩|), with r3 taken from faceBasis.
Vec3 faceScales(const OrientedTriangle &t);

/// α1·v1 + α2·v2 + α3·v3. Throws ValidationError unless the alphas are
/// non-negative and sum to 1 within 1e-9.
Vec3 bindMean(const OrientedTriangle &t, const Vec3 &alphas);

void validateBinding(const FaceBinding &b);

/// The Gaussian for one binding: covariance rho·Σ_face, realised as
/// sqrt(rho) on every scale component.
SplatGaussian realize(const TriMesh &mesh, const FaceBinding &b);

/// Realises every binding in order.
std::vector<SplatGaussian> realizeAll(const BoundScene &scene);

/// k bindings per face with alphas drawn uniformly from the simplex
/// (deterministic in seed), rho = 1, opacity = 1 and mid-grey colour.
BoundScene bindUniform(const TriMesh &mesh, std::uint32_t k, std::uint64_t seed, int shDegree = 0);

} // namespace games
