// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "games/face_param.hpp"
#include "games/soup.hpp"
#include "games/types.hpp"

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace games {

/// Chooses the vertices a step acts on. A box is tested against the vertex
/// positions current at the moment the step runs.
struct VertexSelector {
    enum class Kind { All, Indices, Box };
    Kind kind = Kind::All;
    std::vector<std::uint32_t> indices;
    Vec3 boxMin = Vec3::Zero();
    Vec3 boxMax = Vec3::Zero();

    static VertexSelector all() { return {}; }
    static VertexSelector of(std::vector<std::uint32_t> idx) {
        return {Kind::Indices, std::move(idx), Vec3::Zero(), Vec3::Zero()};
    }
    static VertexSelector box(const Vec3 &lo, const Vec3 &hi) { return {Kind::Box, {}, lo, hi}; }

    bool operator==(const VertexSelector &o) const {
        return kind == o.kind && indices == o.indices && boxMin == o.boxMin && boxMax == o.boxMax;
    }
};

/// p ← Q·(p − pivot) + pivot + translation. Without a pivot Q acts about the origin.
struct RigidStep {
    Quat rotation = Quat::Identity();
    Vec3 translation = Vec3::Zero();
    std::optional<Vec3> pivot;
    VertexSelector select;
};

/// p ← pivot + factors ⊙ (p − pivot).
struct ScaleStep {
    Vec3 factors = Vec3::Ones();
    Vec3 pivot = Vec3::Zero();
    VertexSelector select;
};

/// Explicit new positions for an index set.
struct VertexSetStep {
    std::vector<std::uint32_t> indices;
    std::vector<Vec3> positions;
};

/// Rotation about `axis` through `origin` by an angle growing linearly with
/// the coordinate along `along`: θ = anglePerUnit·⟨p − origin, along⟩.
struct BendStep {
    Vec3 axis = Vec3::UnitZ();
    Vec3 along = Vec3::UnitX();
    Vec3 origin = Vec3::Zero();
    double anglePerUnit = 0.0;
    VertexSelector select;
};

using DeformStep = std::variant<RigidStep, ScaleStep, VertexSetStep, BendStep>;

struct DeformSpec {
    std::vector<DeformStep> steps;
};

struct Keyframe {
    double time = 0.0;
    DeformSpec spec;
};

/// Each keyframe's spec is applied to the rest pose, not chained.
struct Keyframes {
    std::vector<Keyframe> frames;
};

/// Throws ValidationError for out-of-range indices, zero scale factors,
/// mismatched vertex_set lengths or zero-length axes.
void validateSpec(const DeformSpec &spec, std::size_t vertexCount);

void validateKeyframes(const Keyframes &k);

/// Runs the steps in order on a bare point set.
void applyToPoints(std::vector<Vec3> &points, const DeformSpec &spec);

/// Soup vertex i·3 + j is vertex j of triangle i.
std::vector<Vec3> soupVertices(const TriangleSoup &soup);
void setSoupVertices(TriangleSoup &soup, std::span<const Vec3> vertices);

/// Topology is never changed. A step sequence that leaves any face degenerate
/// raises GeometryError naming that face.
TriMesh applyDeform(const TriMesh &mesh, const DeformSpec &spec);
TriangleSoup applyDeform(const TriangleSoup &soup, const DeformSpec &spec);
BoundScene applyDeform(const BoundScene &scene, const DeformSpec &spec);

/// Spec for time t. Between two keyframes whose steps have the same shape,
/// step parameters are blended (slerp for rotations, linear otherwise);
/// otherwise both keyframes are resolved against `rest` and the positions
/// are blended linearly into one vertex_set step. At a keyframe time the
/// keyframe's own spec is returned. Throws RangeError outside the keyframe span.
DeformSpec interpolate(const Keyframes &k, double t, std::span<const Vec3> rest);

inline constexpr int kMaxSubdivisionRounds = 6;

/// Splits every face with area above the threshold into four by its edge
/// midpoints, repeating until all faces fit or kMaxSubdivisionRounds pass.
/// Each split face is replaced in place by its corner faces then the middle.
TriMesh subdivideLargeFaces(const TriMesh &mesh, double areaThreshold);

/// Only legal while nothing is bound: a scene with bindings whose mesh would
/// change is rejected.
BoundScene subdivideLargeFaces(const BoundScene &scene, double areaThreshold);

} // namespace games
