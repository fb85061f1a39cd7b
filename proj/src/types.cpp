// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/types.hpp"

#include "games/errors.hpp"

#include <algorithm>
#include <cmath>

namespace games {

SphericalHarmonics SphericalHarmonics::withDegree(int degree) {
    if (degree < 0 || degree > kMaxDegree)
        throw ValidationError("spherical harmonic degree must be in 0..3, got " + std::to_string(degree));
    SphericalHarmonics sh;
    sh.coeffs.assign(countForDegree(degree), Vec3::Zero());
    return sh;
}

SphericalHarmonics SphericalHarmonics::constant(const Vec3 &dc) {
    SphericalHarmonics sh;
    sh.coeffs = {dc};
    return sh;
}

int SphericalHarmonics::degree() const {
    for (int d = 0; d <= kMaxDegree; ++d)
        if (coeffs.size() == countForDegree(d))
            return d;
    throw ValidationError("spherical harmonic block has " + std::to_string(coeffs.size()) +
                          " coefficients, not (L+1)^2 for L in 0..3");
}

bool isOrthonormal(const Mat3 &m, double tol) {
    return ((m.transpose() * m) - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol;
}

Mat3 covarianceFromRs(const Mat3 &rotation, const Vec3 &scale) {
    if (!isOrthonormal(rotation))
        throw ValidationError("covariance: rotation is not orthonormal");
    if ((scale.array() < 0.0).any())
        throw ValidationError("covariance: negative scale component");
    const Mat3 rs = rotation * scale.asDiagonal();
    Mat3 sigma = rs * rs.transpose();
    // Enforce exact symmetry; the product is symmetric only up to rounding.
    return 0.5 * (sigma + sigma.transpose());
}

Mat3 covariance(const SplatGaussian &g) { return covarianceFromRs(quatToMatrix(g.rotation), g.scale); }

Mat3 quatToMatrix(const Quat &q) {
    const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
    Mat3 r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
         2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return r;
}

Quat canonicalQuat(const Quat &q) {
    Quat n = q.normalized();
    if (n.w() < 0.0)
        n.coeffs() = -n.coeffs();
    return n;
}

Quat matrixToQuat(const Mat3 &r) {
    if (!isOrthonormal(r))
        throw ValidationError("rotation matrix is not orthonormal");
    if (r.determinant() < 0.0)
        throw HandednessError("rotation matrix has determinant -1");

    // Shepperd: branch on the largest diagonal combination for stability.
    const double trace = r.trace();
    Quat q;
    if (trace >= r(0, 0) && trace >= r(1, 1) && trace >= r(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + trace);
        q = Quat(0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s);
    } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
        q = Quat((r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s);
    } else if (r(1, 1) >= r(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
        q = Quat((r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s);
    } else {
        const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
        q = Quat((r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s);
    }
    return canonicalQuat(q);
}

bool isFlat(const SplatGaussian &g) { return g.scale(0) >= 0.0 && g.scale(0) <= 2.0 * kFlatEpsilon; }

SplatGaussian flatten(const SplatGaussian &g) {
    SplatGaussian out = g;
    int smallest = 0;
    for (int i = 1; i < 3; ++i)
        if (g.scale(i) < g.scale(smallest))
            smallest = i;

    if (smallest != 0) {
        std::array<int, 3> order{smallest, 0, 0};
        int next = 1;
        for (int i = 0; i < 3; ++i)
            if (i != smallest)
                order[next++] = i;

        const Mat3 r = quatToMatrix(g.rotation);
        Mat3 permuted;
        for (int c = 0; c < 3; ++c) {
            permuted.col(c) = r.col(order[c]);
            out.scale(c) = g.scale(order[c]);
        }
        // Moving axis 2 to the front keeps the cyclic order; axis 1 does not.
        if (smallest == 1)
            permuted.col(0) = -permuted.col(0);
        out.rotation = matrixToQuat(permuted);
    }
    out.scale(0) = kFlatEpsilon;
    return out;
}

void validateSplat(const SplatGaussian &g) {
    if (std::abs(g.rotation.norm() - 1.0) > 1e-9)
        throw ValidationError("splat rotation quaternion is not unit length");
    if ((g.scale.array() < 0.0).any() || !g.scale.allFinite())
        throw ValidationError("splat scale must be finite and non-negative");
    if (!(g.opacity >= 0.0 && g.opacity <= 1.0))
        throw ValidationError("splat opacity outside [0,1]");
    (void)g.sh.degree();
}

double surfaceArea(const TriMesh &mesh) {
    double area = 0.0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f)
        area += triangleArea(mesh.triangle(f));
    return area;
}

void validateMesh(const TriMesh &mesh) {
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face &face = mesh.faces[f];
        for (auto idx : face)
            if (idx >= mesh.vertices.size())
                throw GeometryError("vertex index " + std::to_string(idx) + " out of range", f);
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
            throw GeometryError("face repeats a vertex index", f);
        if (isDegenerate(mesh.triangle(f)))
            throw GeometryError("degenerate face", f);
    }
}

} // namespace games
