// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "games/types.hpp"

#include <span>
#include <vector>

namespace games {

/// Appearance carried by a soup triangle.
struct SoupAttributes {
    double opacity = 1.0;
    SphericalHarmonics sh;

    bool operator==(const SoupAttributes &) const = default;
};

/// Unconnected oriented triangles, one per flat Gaussian.
struct TriangleSoup {
    std::vector<OrientedTriangle> triangles;
    std::vector<SoupAttributes> attrs;

    std::size_t size() const { return triangles.size(); }
    bool operator==(const TriangleSoup &) const = default;
};

/// Scales at or below this multiple of kFlatEpsilon make a splat unusable as
/// a soup triangle.
inline constexpr double kSoupMinExtentFactor = 10.0;

/// v1 = m, v2 = m + s2·r2, v3 = m + s3·r3. Throws ValidationError for a
/// non-flat splat and GeometryError when s2 or s3 is too small.
OrientedTriangle gaussianToTriangle(const SplatGaussian &g);

/// Re-parameterises a Gaussian from a frozen triangle: mean at v1, axes
/// (normal, edge v1v2, in-plane perpendicular), scales (ε, edge length,
/// height of v3 above edge v1v2).
SplatGaussian triangleToGaussian(const OrientedTriangle &t, const SoupAttributes &attrs);

struct SoupExtraction {
    TriangleSoup soup;
    /// Input indices that were skipped as degenerate (only with skipDegenerate).
    std::vector<std::size_t> dropped;
};

/// One triangle per splat, order preserved. Degenerate splats are collected;
/// without skipDegenerate a DegenerateElementsError listing every index is
/// thrown, otherwise they are left out and reported in `dropped`. Non-flat
/// inputs are a ValidationError (call flatten first).
SoupExtraction extractSoup(std::span<const SplatGaussian> gaussians, bool skipDegenerate = false);

std::vector<SplatGaussian> realizeSoup(const TriangleSoup &soup);

void validateSoup(const TriangleSoup &soup);

} // namespace games
