// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "fixtures.hpp"

#include "games/deform.hpp"
#include "games/errors.hpp"
#include "games/face_param.hpp"
#include "games/soup.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace games;
using fixtures::Rng;

namespace {

RigidStep translation(const Vec3 &t) {
    RigidStep s;
    s.translation = t;
    return s;
}

DeformSpec specOf(std::vector<DeformStep> steps) { return DeformSpec{std::move(steps)}; }

double relErr(const Mat3 &a, const Mat3 &b) { return (a - b).norm() / b.norm(); }

} // namespace

TEST_CASE("empty spec leaves the mesh untouched") {
    const TriMesh mesh = fixtures::uvSphere(10, 6);
    CHECK(applyDeform(mesh, DeformSpec{}) == mesh);
}

TEST_CASE("rigid motion of a bound mesh conjugates every covariance") {
    Rng rng(31);
    const BoundScene scene = bindUniform(fixtures::uvSphere(10, 6), 2, 3);
    const Quat q = fixtures::randomUnitQuat(rng);
    RigidStep step;
    step.rotation = q;
    step.translation = {0.5, -1, 2};
    const BoundScene moved = applyDeform(scene, specOf({step}));
    CHECK(moved.mesh.faces == scene.mesh.faces);
    CHECK(moved.bindings == scene.bindings);

    const Mat3 r = quatToMatrix(q);
    const auto a = realizeAll(scene);
    const auto b = realizeAll(moved);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK((b[i].mean - (r * a[i].mean + step.translation)).norm() <= 1e-9);
        CHECK(relErr(covariance(b[i]), r * covariance(a[i]) * r.transpose()) <= 1e-9);
    }
}

TEST_CASE("uniform scale doubles the planar extents") {
    const BoundScene scene = bindUniform(fixtures::uvSphere(10, 6), 1, 4);
    ScaleStep step;
    step.factors = Vec3::Constant(2.0);
    const BoundScene big = applyDeform(scene, specOf({step}));
    const auto a = realizeAll(scene);
    const auto b = realizeAll(big);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(b[i].scale[1] == doctest::Approx(2 * a[i].scale[1]).epsilon(1e-12));
        CHECK(b[i].scale[2] == doctest::Approx(2 * a[i].scale[2]).epsilon(1e-12));
        CHECK((b[i].mean - 2 * a[i].mean).norm() <= 1e-12);
    }
}

TEST_CASE("selectors restrict a step") {
    TriMesh mesh;
    mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 5, 5}};
    mesh.faces = {{0, 1, 2}, {1, 3, 2}};

    RigidStep byIndex = translation({0, 0, 1});
    byIndex.select = VertexSelector::of({3});
    auto out = applyDeform(mesh, specOf({byIndex}));
    CHECK(out.vertices[3] == Vec3(5, 5, 6));
    CHECK(out.vertices[0] == mesh.vertices[0]);

    ScaleStep byBox;
    byBox.factors = {3, 3, 3};
    byBox.pivot = {5, 5, 5};
    byBox.select = VertexSelector::box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
    out = applyDeform(mesh, specOf({byBox}));
    CHECK(out.vertices[0] == Vec3(-10, -10, -10));
    CHECK(out.vertices[1] == mesh.vertices[1]);
}

TEST_CASE("box selectors see positions left by earlier steps") {
    TriMesh mesh;
    mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    mesh.faces = {{0, 1, 2}};
    RigidStep first = translation({10, 0, 0});
    first.select = VertexSelector::of({0});
    RigidStep second = translation({0, 0, 1});
    second.select = VertexSelector::box({9, -1, -1}, {11, 1, 1});
    const auto out = applyDeform(mesh, specOf({first, second}));
    CHECK(out.vertices[0] == Vec3(10, 0, 1));
    CHECK(out.vertices[1] == Vec3(1, 0, 0));
}

TEST_CASE("rigid step about a pivot") {
    TriMesh mesh;
    mesh.vertices = {{2, 0, 0}, {3, 0, 0}, {2, 1, 0}};
    mesh.faces = {{0, 1, 2}};
    RigidStep step;
    step.rotation = Quat(Eigen::AngleAxisd(std::numbers::pi / 2, Vec3::UnitZ()));
    step.pivot = Vec3(2, 0, 0);
    const auto out = applyDeform(mesh, specOf({step}));
    CHECK((out.vertices[0] - Vec3(2, 0, 0)).norm() <= 1e-15);
    CHECK((out.vertices[1] - Vec3(2, 1, 0)).norm() <= 1e-15);
    CHECK((out.vertices[2] - Vec3(1, 0, 0)).norm() <= 1e-15);
}

TEST_CASE("bend rotates by an angle proportional to distance") {
    BendStep bend;
    bend.axis = Vec3::UnitZ();
    bend.along = Vec3::UnitX();
    bend.anglePerUnit = std::numbers::pi / 2;
    std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {2, 0, 1}, {0, 3, 0}};
    applyToPoints(pts, specOf({bend}));
    CHECK((pts[0] - Vec3(0, 0, 0)).norm() <= 1e-15);
    CHECK((pts[1] - Vec3(0, 1, 0)).norm() <= 1e-15); // quarter turn
    CHECK((pts[2] - Vec3(-2, 0, 1)).norm() <= 1e-15); // half turn, z kept
    CHECK((pts[3] - Vec3(0, 3, 0)).norm() <= 1e-15); // zero coordinate along x
}

TEST_CASE("validateSpec") {
    ScaleStep zero;
    zero.factors = {1, 0, 1};
    CHECK_THROWS_AS(validateSpec(specOf({zero}), 3), ValidationError);
    RigidStep far = translation({1, 0, 0});
    far.select = VertexSelector::of({7});
    CHECK_THROWS_AS(validateSpec(specOf({far}), 3), ValidationError);
    VertexSetStep uneven;
    uneven.indices = {0, 1};
    uneven.positions = {Vec3::Zero()};
    CHECK_THROWS_AS(validateSpec(specOf({uneven}), 3), ValidationError);
    BendStep noAxis;
    noAxis.axis = Vec3::Zero();
    CHECK_THROWS_AS(validateSpec(specOf({noAxis}), 3), ValidationError);
    CHECK_NOTHROW(validateSpec(specOf({translation({1, 2, 3})}), 3));
}

TEST_CASE("an edit that collapses a face names it") {
    TriMesh mesh;
    mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    mesh.faces = {{0, 1, 2}, {1, 3, 2}};
    VertexSetStep collapse;
    collapse.indices = {3};
    collapse.positions = {{1, 0, 0}};
    try {
        applyDeform(mesh, specOf({collapse}));
        FAIL("expected GeometryError");
    } catch (const GeometryError &e) {
        CHECK(e.face() == std::optional<std::size_t>(1));
    }
}

TEST_CASE("sequential application equals the concatenated spec") {
    Rng rng(32);
    const TriMesh mesh = fixtures::uvSphere(10, 6);
    RigidStep a;
    a.rotation = fixtures::randomUnitQuat(rng);
    a.translation = {0.1, 0.2, 0.3};
    ScaleStep b;
    b.factors = {1.5, 0.5, 2};
    b.pivot = {0.1, 0, 0};
    BendStep c;
    c.anglePerUnit = 0.3;
    c.select = VertexSelector::box({-2, 0, -2}, {2, 2, 2});
    const auto stepwise = applyDeform(applyDeform(mesh, specOf({a, b})), specOf({c}));
    CHECK(stepwise == applyDeform(mesh, specOf({a, b, c})));
}

TEST_CASE("soups deform through their vertices") {
    const TriangleSoup soup = extractSoup(fixtures::randomFlatSplats(10, 33)).soup;
    const auto verts = soupVertices(soup);
    CHECK(verts.size() == 30);
    CHECK(verts[4] == soup.triangles[1].v2);

    RigidStep step = translation({1, 1, 1});
    step.select = VertexSelector::of({0, 1, 2});
    const TriangleSoup moved = applyDeform(soup, specOf({step}));
    CHECK(moved.triangles[0].v1 == soup.triangles[0].v1 + Vec3(1, 1, 1));
    CHECK(moved.triangles[1] == soup.triangles[1]);
    CHECK(moved.attrs == soup.attrs);
}

TEST_CASE("interpolate") {
    const TriMesh mesh = fixtures::uvSphere(10, 6);
    Keyframes keys;
    keys.frames = {{0.0, specOf({translation({0, 0, 0})})}, {2.0, specOf({translation({4, 0, 0})})}};

    std::vector<Vec3> at0 = mesh.vertices;
    applyToPoints(at0, interpolate(keys, 0.0, mesh.vertices));
    CHECK(at0 == mesh.vertices);

    std::vector<Vec3> end = mesh.vertices;
    applyToPoints(end, interpolate(keys, 2.0, mesh.vertices));
    for (std::size_t i = 0; i < end.size(); ++i)
        CHECK(end[i] == mesh.vertices[i] + Vec3(4, 0, 0));

    std::vector<Vec3> mid = mesh.vertices;
    applyToPoints(mid, interpolate(keys, 1.0, mesh.vertices));
    for (std::size_t i = 0; i < mid.size(); ++i)
        CHECK((mid[i] - 0.5 * (at0[i] + end[i])).norm() <= 1e-12);

    CHECK_THROWS_AS(interpolate(keys, -0.1, mesh.vertices), RangeError);
    CHECK_THROWS_AS(interpolate(keys, 2.1, mesh.vertices), RangeError);
}

TEST_CASE("interpolate slerps rigid rotations") {
    RigidStep quarter;
    quarter.rotation = Quat(Eigen::AngleAxisd(std::numbers::pi / 2, Vec3::UnitZ()));
    Keyframes keys;
    keys.frames = {{0.0, specOf({RigidStep{}})}, {1.0, specOf({quarter})}};
    std::vector<Vec3> pts = {{1, 0, 0}};
    applyToPoints(pts, interpolate(keys, 0.5, pts));
    const double h = std::sqrt(0.5);
    CHECK((pts[0] - Vec3(h, h, 0)).norm() <= 1e-12); // on the arc, not the chord
}

TEST_CASE("interpolate blends positions when keyframes differ in shape") {
    const TriMesh mesh = fixtures::uvSphere(10, 6);
    ScaleStep grow;
    grow.factors = Vec3::Constant(3.0);
    Keyframes keys;
    keys.frames = {{0.0, specOf({translation({1, 0, 0})})}, {1.0, specOf({grow, translation({0, 1, 0})})}};

    std::vector<Vec3> a = mesh.vertices, b = mesh.vertices;
    applyToPoints(a, keys.frames[0].spec);
    applyToPoints(b, keys.frames[1].spec);

    // Continuity sweep: per-vertex steps are bounded by the keyframe gap times Δt.
    std::vector<Vec3> prev = a;
    const int n = 20;
    for (int s = 1; s <= n; ++s) {
        const double t = double(s) / n;
        std::vector<Vec3> cur = mesh.vertices;
        applyToPoints(cur, interpolate(keys, t, mesh.vertices));
        for (std::size_t i = 0; i < cur.size(); ++i) {
            CHECK((cur[i] - ((1 - t) * a[i] + t * b[i])).norm() <= 1e-12);
            CHECK((cur[i] - prev[i]).norm() <= (b[i] - a[i]).norm() / n + 1e-12);
        }
        prev = cur;
    }
}

TEST_CASE("validateKeyframes") {
    Keyframes empty;
    CHECK_THROWS_AS(validateKeyframes(empty), ValidationError);
    Keyframes backwards;
    backwards.frames = {{1.0, {}}, {1.0, {}}};
    CHECK_THROWS_AS(validateKeyframes(backwards), ValidationError);
}

TEST_CASE("subdivideLargeFaces area accounting") {
    TriMesh tri;
    tri.vertices = {{0, 0, 0}, {4, 0, 0}, {0, 2, 0}}; // area 4
    tri.faces = {{0, 1, 2}};
    CHECK(subdivideLargeFaces(tri, 4.0) == tri);

    // 4 > 0.9 and 1 > 0.9 split, 0.25 stops: two rounds, 16 faces of 1/4.
    const TriMesh out = subdivideLargeFaces(tri, 0.9);
    CHECK(out.faces.size() == 16);
    CHECK(out.vertices.size() == 15); // (2^2 + 1)(2^2 + 2)/2 lattice points
    for (std::size_t f = 0; f < out.faces.size(); ++f) {
        CHECK(triangleArea(out.triangle(f)) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(faceNormal(out.triangle(f)).z() > 0.0); // winding kept
    }
    CHECK(std::abs(surfaceArea(out) - 4.0) <= 1e-9 * 4.0);
    CHECK(subdivideLargeFaces(tri, 0.9) == out);
    CHECK_THROWS_AS(subdivideLargeFaces(tri, 0.0), ValidationError);
}

TEST_CASE("subdivideLargeFaces leaves small faces in place") {
    const TriMesh mesh = fixtures::oversizedFaceFixture();
    REQUIRE(mesh.faces.size() == 20);
    const TriMesh out = subdivideLargeFaces(mesh, 0.1);
    CHECK(out.faces.size() == 19 + 16);
    for (std::size_t f = 0; f < fixtures::kOversizedFace; ++f)
        CHECK(out.triangle(f) == mesh.triangle(f));
    CHECK(std::abs(surfaceArea(out) - surfaceArea(mesh)) <= 1e-9 * surfaceArea(mesh));
}

TEST_CASE("subdivision stops after the round limit") {
    TriMesh tri;
    tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    tri.faces = {{0, 1, 2}};
    const TriMesh out = subdivideLargeFaces(tri, 1e-9);
    CHECK(out.faces.size() == std::size_t(1) << (2 * kMaxSubdivisionRounds));
}

TEST_CASE("bound scenes cannot be subdivided once bound") {
    BoundScene scene = bindUniform(fixtures::oversizedFaceFixture(), 1, 1);
    CHECK_THROWS_AS(subdivideLargeFaces(scene, 0.1), ValidationError);
    CHECK(subdivideLargeFaces(scene, 10.0) == scene);
    scene.bindings.clear();
    CHECK(subdivideLargeFaces(scene, 0.1).mesh.faces.size() == 35);
}
