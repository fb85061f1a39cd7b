// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/deform.hpp"

#include "games/errors.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace games {

namespace {

template <class... Ts> struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

void checkIndices(std::span<const std::uint32_t> indices, std::size_t vertexCount, const char *what) {
    for (auto i : indices)
        if (i >= vertexCount)
            throw ValidationError(std::string(what) + ": vertex index " + std::to_string(i) + " out of range (" +
                                  std::to_string(vertexCount) + " vertices)");
}

void checkSelector(const VertexSelector &s, std::size_t vertexCount, const char *what) {
    if (s.kind == VertexSelector::Kind::Indices)
        checkIndices(s.indices, vertexCount, what);
    if (s.kind == VertexSelector::Kind::Box && (s.boxMin.array() > s.boxMax.array()).any())
        throw ValidationError(std::string(what) + ": selection box min exceeds max");
}

std::vector<std::uint32_t> resolve(const VertexSelector &s, std::span<const Vec3> points) {
    std::vector<std::uint32_t> out;
    switch (s.kind) {
    case VertexSelector::Kind::All:
        out.resize(points.size());
        for (std::uint32_t i = 0; i < points.size(); ++i)
            out[i] = i;
        break;
    case VertexSelector::Kind::Indices:
        out = s.indices;
        break;
    case VertexSelector::Kind::Box:
        for (std::uint32_t i = 0; i < points.size(); ++i)
            if ((points[i].array() >= s.boxMin.array()).all() && (points[i].array() <= s.boxMax.array()).all())
                out.push_back(i);
        break;
    }
    return out;
}

void checkFaces(const TriMesh &mesh) {
    for (std::size_t f = 0; f < mesh.faces.size(); ++f)
        if (isDegenerate(mesh.triangle(f)))
            throw GeometryError("deformation made a face degenerate", f);
}

std::optional<DeformStep> blendStep(const DeformStep &a, const DeformStep &b, double u) {
    if (a.index() != b.index())
        return std::nullopt;
    return std::visit(
        Overloaded{
            [&](const RigidStep &ra) -> std::optional<DeformStep> {
                const auto &rb = std::get<RigidStep>(b);
                if (!(ra.pivot == rb.pivot) || !(ra.select == rb.select))
                    return std::nullopt;
                RigidStep r = ra;
                r.rotation = ra.rotation.normalized().slerp(u, rb.rotation.normalized());
                r.translation = ra.translation + u * (rb.translation - ra.translation);
                return r;
            },
            [&](const ScaleStep &sa) -> std::optional<DeformStep> {
                const auto &sb = std::get<ScaleStep>(b);
                if (sa.pivot != sb.pivot || !(sa.select == sb.select))
                    return std::nullopt;
                ScaleStep s = sa;
                s.factors = sa.factors + u * (sb.factors - sa.factors);
                // A blend may cross zero; that would collapse geometry.
                if ((s.factors.array() == 0.0).any())
                    return std::nullopt;
                return s;
            },
            [&](const VertexSetStep &va) -> std::optional<DeformStep> {
                const auto &vb = std::get<VertexSetStep>(b);
                if (va.indices != vb.indices)
                    return std::nullopt;
                VertexSetStep v = va;
                for (std::size_t i = 0; i < v.positions.size(); ++i)
                    v.positions[i] = va.positions[i] + u * (vb.positions[i] - va.positions[i]);
                return v;
            },
            [&](const BendStep &ba) -> std::optional<DeformStep> {
                const auto &bb = std::get<BendStep>(b);
                if (ba.axis != bb.axis || ba.along != bb.along || ba.origin != bb.origin || !(ba.select == bb.select))
                    return std::nullopt;
                BendStep s = ba;
                s.anglePerUnit = ba.anglePerUnit + u * (bb.anglePerUnit - ba.anglePerUnit);
                return s;
            },
        },
        a);
}

} // namespace

void validateSpec(const DeformSpec &spec, std::size_t vertexCount) {
    for (const DeformStep &step : spec.steps) {
        std::visit(Overloaded{
                       [&](const RigidStep &r) {
                           if (!(r.rotation.norm() > 1e-12))
                               throw ValidationError("rigid: rotation quaternion has zero length");
                           checkSelector(r.select, vertexCount, "rigid");
                       },
                       [&](const ScaleStep &s) {
                           if ((s.factors.array() == 0.0).any() || !s.factors.allFinite())
                               throw ValidationError("scale: factors must be finite and nonzero");
                           checkSelector(s.select, vertexCount, "scale");
                       },
                       [&](const VertexSetStep &v) {
                           if (v.indices.size() != v.positions.size())
                               throw ValidationError("vertex_set: indices and positions differ in length");
                           checkIndices(v.indices, vertexCount, "vertex_set");
                       },
                       [&](const BendStep &b) {
                           if (!(b.axis.norm() > 1e-12) || !(b.along.norm() > 1e-12))
                               throw ValidationError("bend: axis and along must be nonzero vectors");
                           checkSelector(b.select, vertexCount, "bend");
                       },
                   },
                   step);
    }
}

void validateKeyframes(const Keyframes &k) {
    if (k.frames.empty())
        throw ValidationError("keyframes: at least one keyframe is required");
    for (std::size_t i = 1; i < k.frames.size(); ++i)
        if (!(k.frames[i].time > k.frames[i - 1].time))
            throw ValidationError("keyframes: times must be strictly increasing");
}

void applyToPoints(std::vector<Vec3> &points, const DeformSpec &spec) {
    for (const DeformStep &step : spec.steps) {
        std::visit(Overloaded{
                       [&](const RigidStep &r) {
                           const Mat3 q = quatToMatrix(r.rotation.normalized());
                           const Vec3 pivot = r.pivot.value_or(Vec3::Zero());
                           for (auto i : resolve(r.select, points))
                               points[i] = q * (points[i] - pivot) + pivot + r.translation;
                       },
                       [&](const ScaleStep &s) {
                           for (auto i : resolve(s.select, points))
                               points[i] = s.pivot + s.factors.cwiseProduct(points[i] - s.pivot);
                       },
                       [&](const VertexSetStep &v) {
                           for (std::size_t j = 0; j < v.indices.size(); ++j)
                               points[v.indices[j]] = v.positions[j];
                       },
                       [&](const BendStep &b) {
                           const Vec3 axis = b.axis.normalized();
                           const Vec3 along = b.along.normalized();
                           for (auto i : resolve(b.select, points)) {
                               const Vec3 local = points[i] - b.origin;
                               const double angle = b.anglePerUnit * local.dot(along);
                               points[i] = b.origin + Eigen::AngleAxisd(angle, axis) * local;
                           }
                       },
                   },
                   step);
    }
}

std::vector<Vec3> soupVertices(const TriangleSoup &soup) {
    std::vector<Vec3> out;
    out.reserve(3 * soup.size());
    for (const auto &t : soup.triangles) {
        out.push_back(t.v1);
        out.push_back(t.v2);
        out.push_back(t.v3);
    }
    return out;
}

void setSoupVertices(TriangleSoup &soup, std::span<const Vec3> vertices) {
    if (vertices.size() != 3 * soup.size())
        throw ValidationError("soup vertex count mismatch");
    for (std::size_t i = 0; i < soup.size(); ++i)
        soup.triangles[i] = {vertices[3 * i], vertices[3 * i + 1], vertices[3 * i + 2]};
}

TriMesh applyDeform(const TriMesh &mesh, const DeformSpec &spec) {
    validateSpec(spec, mesh.vertices.size());
    TriMesh out = mesh;
    applyToPoints(out.vertices, spec);
    checkFaces(out);
    return out;
}

TriangleSoup applyDeform(const TriangleSoup &soup, const DeformSpec &spec) {
    validateSoup(soup);
    std::vector<Vec3> points = soupVertices(soup);
    validateSpec(spec, points.size());
    applyToPoints(points, spec);
    TriangleSoup out = soup;
    setSoupVertices(out, points);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (isDegenerate(out.triangles[i]))
            throw GeometryError("deformation made a soup triangle degenerate", i);
    return out;
}

BoundScene applyDeform(const BoundScene &scene, const DeformSpec &spec) {
    return {applyDeform(scene.mesh, spec), scene.bindings};
}

DeformSpec interpolate(const Keyframes &k, double t, std::span<const Vec3> rest) {
    validateKeyframes(k);
    const auto &frames = k.frames;
    if (!(t >= frames.front().time && t <= frames.back().time))
        throw RangeError("time " + std::to_string(t) + " outside keyframe range [" +
                         std::to_string(frames.front().time) + ", " + std::to_string(frames.back().time) + "]");

    std::size_t hi = 0;
    while (frames[hi].time < t)
        ++hi;
    if (frames[hi].time == t)
        return frames[hi].spec;

    const Keyframe &a = frames[hi - 1];
    const Keyframe &b = frames[hi];
    const double u = (t - a.time) / (b.time - a.time);

    if (a.spec.steps.size() == b.spec.steps.size()) {
        DeformSpec blended;
        bool compatible = true;
        for (std::size_t i = 0; i < a.spec.steps.size() && compatible; ++i) {
            auto step = blendStep(a.spec.steps[i], b.spec.steps[i], u);
            if (step)
                blended.steps.push_back(std::move(*step));
            else
                compatible = false;
        }
        if (compatible)
            return blended;
    }

    std::vector<Vec3> pa(rest.begin(), rest.end());
    std::vector<Vec3> pb = pa;
    validateSpec(a.spec, pa.size());
    validateSpec(b.spec, pb.size());
    applyToPoints(pa, a.spec);
    applyToPoints(pb, b.spec);

    VertexSetStep set;
    set.indices.resize(pa.size());
    set.positions.resize(pa.size());
    for (std::uint32_t i = 0; i < pa.size(); ++i) {
        set.indices[i] = i;
        set.positions[i] = pa[i] + u * (pb[i] - pa[i]);
    }
    return {{std::move(set)}};
}

TriMesh subdivideLargeFaces(const TriMesh &mesh, double areaThreshold) {
    if (!(areaThreshold > 0.0))
        throw ValidationError("subdivision area threshold must be positive");

    TriMesh current = mesh;
    for (int round = 0; round < kMaxSubdivisionRounds; ++round) {
        bool any = false;
        for (std::size_t f = 0; f < current.faces.size() && !any; ++f)
            any = triangleArea(current.triangle(f)) > areaThreshold;
        if (!any)
            break;

        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
        auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::minmax(a, b);
            auto it = midpoints.find(key);
            if (it != midpoints.end())
                return it->second;
            const auto idx = static_cast<std::uint32_t>(current.vertices.size());
            current.vertices.push_back(0.5 * (current.vertices[a] + current.vertices[b]));
            midpoints.emplace(key, idx);
            return idx;
        };

        std::vector<Face> faces;
        faces.reserve(current.faces.size() * 2);
        for (std::size_t f = 0; f < current.faces.size(); ++f) {
            const Face face = current.faces[f];
            if (!(triangleArea(current.triangle(f)) > areaThreshold)) {
                faces.push_back(face);
                continue;
            }
            const auto [a, b, c] = face;
            const auto ab = midpoint(a, b);
            const auto bc = midpoint(b, c);
            const auto ca = midpoint(c, a);
            faces.push_back({a, ab, ca});
            faces.push_back({ab, b, bc});
            faces.push_back({ca, bc, c});
            faces.push_back({ab, bc, ca});
        }
        current.faces = std::move(faces);
    }
    return current;
}

BoundScene subdivideLargeFaces(const BoundScene &scene, double areaThreshold) {
    TriMesh mesh = subdivideLargeFaces(scene.mesh, areaThreshold);
    if (!scene.bindings.empty() && !(mesh == scene.mesh))
        throw ValidationError("cannot subdivide a mesh that already has Gaussians bound to it; "
                              "subdivide first, then bind");
    return {std::move(mesh), scene.bindings};
}

} // namespace games
