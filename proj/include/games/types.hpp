// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace games {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Scale assigned to the normal axis of a flat Gaussian.
inline constexpr double kFlatEpsilon = 1e-8;

/// Faces with ‖(v2−v1)×(v3−v1)‖² at or below this are degenerate.
inline constexpr double kDegenerateCross2 = 1e-12;

/// Real spherical-harmonic colour coefficients, one RGB triple per basis
/// function, ordered by band (DC first). Degree L holds (L+1)² triples.
struct SphericalHarmonics {
    std::vector<Vec3> coeffs{Vec3::Zero()};

    static constexpr int kMaxDegree = 3;

    static SphericalHarmonics withDegree(int degree);
    static SphericalHarmonics constant(const Vec3 &dc);

    int degree() const;
    static std::size_t countForDegree(int degree) { return std::size_t(degree + 1) * std::size_t(degree + 1); }

    bool operator==(const SphericalHarmonics &) const = default;
};

/// One anisotropic 3D Gaussian. The rotation is kept as a unit quaternion with
/// non-negative scalar part; its matrix columns are the principal axes r1, r2,
/// r3 scaled by scale(0..2).
struct SplatGaussian {
    Vec3 mean = Vec3::Zero();
    Quat rotation = Quat::Identity();
    Vec3 scale = Vec3::Ones();
    double opacity = 1.0;
    SphericalHarmonics sh;

    bool operator==(const SplatGaussian &o) const {
        return mean == o.mean && rotation.coeffs() == o.rotation.coeffs() && scale == o.scale &&
               opacity == o.opacity && sh == o.sh;
    }
};

struct OrientedTriangle {
    Vec3 v1, v2, v3;

    bool operator==(const OrientedTriangle &) const = default;
};

using Face = std::array<std::uint32_t, 3>;

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;

    OrientedTriangle triangle(std::size_t face) const {
        const Face &f = faces[face];
        return {vertices[f[0]], vertices[f[1]], vertices[f[2]]};
    }

    bool operator==(const TriMesh &) const = default;
};

// -- Covariance algebra -------------------------------------------------------

/// R·S·Sᵀ·Rᵀ with S = diag(scale). Throws ValidationError when R is not
/// orthonormal within 1e-6 or a scale component is negative.
Mat3 covarianceFromRs(const Mat3 &rotation, const Vec3 &scale);

/// Covariance of a splat, via its rotation matrix.
Mat3 covariance(const SplatGaussian &g);

Mat3 quatToMatrix(const Quat &q);

/// Inverse of quatToMatrix, result canonicalised to w >= 0. Throws
/// HandednessError for det(R) = −1 and ValidationError if R is not
/// orthonormal.
Quat matrixToQuat(const Mat3 &rotation);

/// Normalised copy with non-negative scalar part.
Quat canonicalQuat(const Quat &q);

bool isOrthonormal(const Mat3 &m, double tol = 1e-6);

// -- Flat Gaussians -----------------------------------------------------------

/// True when the first scale component is pinned at kFlatEpsilon. PLY storage
/// goes through float32 logs, so a relative slack of 2x is allowed.
bool isFlat(const SplatGaussian &g);

/// Moves the smallest scale axis to position 1 (rotation columns permuted to
/// match, det kept at +1 by negating the new first column when the permutation
/// is odd) and sets it to kFlatEpsilon. The remaining two axes keep their
/// relative order.
SplatGaussian flatten(const SplatGaussian &g);

/// Throws ValidationError on a non-unit quaternion, negative scale or opacity
/// outside [0,1].
void validateSplat(const SplatGaussian &g);

// -- Triangles and meshes -----------------------------------------------------

inline Vec3 edgeCross(const OrientedTriangle &t) { return (t.v2 - t.v1).cross(t.v3 - t.v1); }

inline bool isDegenerate(const OrientedTriangle &t) { return !(edgeCross(t).squaredNorm() > kDegenerateCross2); }

inline double triangleArea(const OrientedTriangle &t) { return 0.5 * edgeCross(t).norm(); }

double surfaceArea(const TriMesh &mesh);

/// Checks index range, repeated indices and degenerate faces. Throws
/// GeometryError naming the first offending face.
void validateMesh(const TriMesh &mesh);

} // namespace games
