// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Optional inputs: GAMES_REFERENCE_PLY, or reference.ply
// under GAMES_DATA_DIR.
//
#include "fixtures.hpp"

#include "games/deform.hpp"
#include "games/errors.hpp"
#include "games/face_param.hpp"
#include "games/io.hpp"
#include "games/render.hpp"
#include "games/soup.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace games;
using fixtures::Rng;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char *format, double a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, a);
    return buf;
}

double relFrob(const Mat3 &got, const Mat3 &want) { return (got - want).norm() / want.norm(); }

// Infinity norm: largest absolute row sum.
double infNorm(const Mat3 &m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

std::vector<SplatGaussian> transformed(const std::vector<SplatGaussian> &splats, const Mat3 &q, const Vec3 &t) {
    const Quat qq = matrixToQuat(q);
    std::vector<SplatGaussian> out = splats;
    for (auto &g : out) {
        g.mean = q * g.mean + t;
        g.rotation = canonicalQuat(qq * g.rotation);
    }
    return out;
}

Camera sceneCamera(int size) { return fixtures::orbitCamera(0.6, 3.2, size, size, 1.1 * size); }

Outcome soupRoundTrip() {
    const auto splats = fixtures::randomFlatSplats(10000, 1001);
    const auto t0 = Clock::now();
    const auto back = realizeSoup(extractSoup(splats).soup);
    const double secs = secondsSince(t0);
    double meanErr = 0.0, covErr = 0.0;
    bool attrs = back.size() == splats.size();
    for (std::size_t i = 0; attrs && i < splats.size(); ++i) {
        meanErr = std::max(meanErr, (back[i].mean - splats[i].mean).cwiseAbs().maxCoeff());
        covErr = std::max(covErr, relFrob(covariance(back[i]), covariance(splats[i])));
        attrs = attrs && back[i].opacity == splats[i].opacity && back[i].sh == splats[i].sh;
    }
    const bool pass = meanErr <= 1e-12 && covErr <= 1e-9 && attrs && secs < 5.0;
    return {pass, "10000 splats, max mean err " + fmt("%.2e", meanErr) + ", max rel cov err " + fmt("%.2e", covErr) +
                      ", attributes " + (attrs ? "bit-identical" : "DIFFER") + ", " + fmt("%.3f", secs) + " s"};
}

Outcome faceBasisSweep() {
    Rng rng(1002);
    double orthoErr = 0.0, detErr = 0.0;
    bool normalExact = true;
    for (int i = 0; i < 10000; ++i) {
        const auto t = fixtures::randomTriangle(rng);
        const Mat3 r = faceBasis(t);
        orthoErr = std::max(orthoErr, infNorm(r.transpose() * r - Mat3::Identity()));
        detErr = std::max(detErr, std::abs(r.determinant() - 1.0));
        normalExact = normalExact && r.col(0) == faceNormal(t);
    }
    const bool pass = orthoErr <= 1e-9 && detErr <= 1e-9 && normalExact;
    return {pass, "10000 triangles, max |RtR - I|inf " + fmt("%.2e", orthoErr) + ", max |det - 1| " +
                      fmt("%.2e", detErr) + ", r1 == normal " + (normalExact ? "exactly" : "NOT exactly")};
}

Outcome bindingEquivariance() {
    Rng rng(1003);
    double meanErr = 0.0, covErr = 0.0;
    for (int i = 0; i < 1000; ++i) {
        TriMesh mesh;
        const auto t = fixtures::randomTriangle(rng);
        mesh.vertices = {t.v1, t.v2, t.v3};
        mesh.faces = {{0, 1, 2}};
        FaceBinding b;
        double a = fixtures::uniform(rng, 0, 1), c = fixtures::uniform(rng, 0, 1);
        if (a > c)
            std::swap(a, c);
        b.alphas = {a, c - a, 1.0 - c};
        b.rho = fixtures::uniform(rng, 0.25, 4.0);
        const Mat3 q = fixtures::randomRotation(rng);
        const Vec3 off = fixtures::uniformVec(rng, -10, 10);
        TriMesh moved = mesh;
        for (auto &v : moved.vertices)
            v = q * v + off;
        const SplatGaussian g = realize(mesh, b), h = realize(moved, b);
        meanErr = std::max(meanErr, (h.mean - (q * g.mean + off)).cwiseAbs().maxCoeff());
        covErr = std::max(covErr, relFrob(covariance(h), q * covariance(g) * q.transpose()));
    }
    return {meanErr <= 1e-9 && covErr <= 1e-9,
            "1000 triples, max mean err " + fmt("%.2e", meanErr) + ", max rel cov err " + fmt("%.2e", covErr)};
}

Outcome scalesInvariance() {
    Rng rng(1004);
    double transErr = 0.0, homErr = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto t = fixtures::randomTriangle(rng);
        const Vec3 base = faceScales(t);
        const Vec3 off = fixtures::uniformVec(rng, -10, 10);
        const Vec3 shifted = faceScales({t.v1 + off, t.v2 + off, t.v3 + off});
        transErr = std::max(transErr, (shifted - base).tail<2>().cwiseQuotient(base.tail<2>()).cwiseAbs().maxCoeff());
        transErr = std::max(transErr, std::abs(shifted[0] - base[0]) / base[0]);
        const Vec3 m = faceCentroid(t);
        for (double lambda : {0.5, 2.0, 7.0}) {
            const Vec3 s = faceScales({m + lambda * (t.v1 - m), m + lambda * (t.v2 - m), m + lambda * (t.v3 - m)});
            homErr = std::max(homErr, std::abs(s[1] - lambda * base[1]) / (lambda * base[1]));
            homErr = std::max(homErr, std::abs(s[2] - lambda * base[2]) / (lambda * base[2]));
        }
    }
    return {transErr <= 1e-9 && homErr <= 1e-9, "1000 triangles, max rel translation err " + fmt("%.2e", transErr) +
                                                     ", max rel homogeneity err (lambda 0.5, 2, 7) " +
                                                     fmt("%.2e", homErr)};
}

Outcome uniformScaleAlgebra() {
    const TriMesh mesh = fixtures::uvSphere(10, 6);
    const BoundScene scene = bindUniform(mesh, 3, 1005);
    ScaleStep twice;
    twice.factors = Vec3::Constant(2.0);
    const BoundScene big = applyDeform(scene, DeformSpec{{twice}});
    const auto a = realizeAll(scene), b = realizeAll(big);
    double blockErr = 0.0, scaleErr = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // Planar block: the covariance with the normal direction projected out.
        const Vec3 n = quatToMatrix(a[i].rotation).col(0);
        const Mat3 p = Mat3::Identity() - n * n.transpose();
        blockErr = std::max(blockErr, relFrob(p * covariance(b[i]) * p, 4.0 * (p * covariance(a[i]) * p)));
        scaleErr = std::max(scaleErr, std::abs(b[i].scale[1] - 2 * a[i].scale[1]) / (2 * a[i].scale[1]));
        scaleErr = std::max(scaleErr, std::abs(b[i].scale[2] - 2 * a[i].scale[2]) / (2 * a[i].scale[2]));
    }
    return {mesh.faces.size() == 100 && blockErr <= 1e-9 && scaleErr <= 1e-9,
            std::to_string(mesh.faces.size()) + "-face sphere, " + std::to_string(a.size()) +
                " splats, max rel planar block err " + fmt("%.2e", blockErr) + ", max rel S'=2S err " +
                fmt("%.2e", scaleErr)};
}

Outcome renderDeterminism() {
    const auto scene = fixtures::renderScene(500, 1006, false, 3);
    const Camera cam = sceneCamera(256);
    const Bytes a = encodePng(rasterize(scene, cam, Vec3::Zero()));
    const Bytes b = encodePng(rasterize(scene, cam, Vec3::Zero()));
    RenderOptions single;
    single.threads = 1;
    const Bytes c = encodePng(rasterize(scene, cam, Vec3::Zero(), single));
    return {a == b && a == c, "500 splats at 256x256, two runs " + std::string(a == b ? "identical" : "DIFFER") +
                                  ", single-threaded run " + (a == c ? "identical" : "DIFFERS") + " (" +
                                  std::to_string(a.size()) + " PNG bytes)"};
}

Outcome renderRigidEquivariance() {
    Rng rng(1007);
    const auto scene = fixtures::renderScene(500, 1008, false, 0);
    const Camera cam = sceneCamera(256);
    const ImageBuffer base = rasterize(scene, cam, Vec3::Zero());
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 3; ++trial) {
        const Mat3 q = fixtures::randomRotation(rng);
        const Vec3 t = fixtures::uniformVec(rng, -5, 5);
        const ImageBuffer moved = rasterize(transformed(scene, q, t), cam.movedWithWorld(q, t), Vec3::Zero());
        worst = std::min(worst, psnr(base, moved));
    }
    return {worst >= 60.0, "500 splats at 256x256, 3 random rigid motions, min PSNR " +
                               fmt("%.2f", psnrForDisplay(worst)) + " dB"};
}

Outcome soupRenderConsistency() {
    const auto t0 = Clock::now();
    const auto scene = fixtures::renderScene(500, 1009, true, 0);
    const Camera cam = sceneCamera(256);
    const ImageBuffer a = rasterize(scene, cam, Vec3::Zero());
    const auto back = realizeSoup(extractSoup(scene).soup);
    const ImageBuffer b = rasterize(back, cam, Vec3::Zero());
    const double db = psnr(a, b);
    const double secs = secondsSince(t0);
    return {db >= 50.0 && secs < 30.0, "500 flat splats at 256x256, PSNR " + fmt("%.2f", psnrForDisplay(db)) +
                                           " dB, " + fmt("%.2f", secs) + " s"};
}

Outcome identityDeformation() {
    const BoundScene scene = bindUniform(fixtures::uvSphere(10, 6), 5, 1010);
    const Camera cam = sceneCamera(256);
    const ImageBuffer a = rasterize(realizeAll(scene), cam, Vec3::Zero());
    const BoundScene same = applyDeform(scene, DeformSpec{});
    const ImageBuffer b = rasterize(realizeAll(same), cam, Vec3::Zero());
    const double db = psnr(a, b);
    return {db >= 60.0, "500 bound splats at 256x256, PSNR " + fmt("%.2f", psnrForDisplay(db)) + " dB"};
}

Outcome plyRoundTrip() {
    fixtures::TempDir dir;
    saveSplats(fixtures::renderScene(100, 1011, false, 3), dir / "fixture.ply");
    const SplatCloud loaded = loadSplats(dir / "fixture.ply");
    saveSplats(loaded, dir / "second.ply");
    const bool same = readFileBytes(dir / "fixture.ply") == readFileBytes(dir / "second.ply");
    bool pass = same && loaded.splats.size() == 100;
    std::string detail = "100-splat fixture (SH degree 3): second file " +
                         std::string(same ? "byte-identical" : "DIFFERS");

    std::filesystem::path ref;
    if (const char *p = std::getenv("GAMES_REFERENCE_PLY"))
        ref = p;
    else if (const char *d = std::getenv("GAMES_DATA_DIR"))
        ref = std::filesystem::path(d) / "reference.ply";
    if (!ref.empty() && std::filesystem::exists(ref)) {
        try {
            const Bytes raw = readFileBytes(ref);
            const SplatCloud cloud = decodeSplatPly(raw);
            // Independent count: the header's element line.
            const std::string text(raw.begin(), raw.begin() + std::min<std::size_t>(raw.size(), 4096));
            const auto at = text.find("element vertex ");
            const std::size_t declared = std::stoull(text.substr(at + 15));
            const bool exact = encodeSplatPly(cloud) == raw;
            pass = pass && cloud.splats.size() == declared && exact;
            detail += "; reference " + ref.filename().string() + ": " + std::to_string(cloud.splats.size()) +
                      " splats (header says " + std::to_string(declared) + "), re-save " +
                      (exact ? "byte-identical" : "DIFFERS");
        } catch (const Error &e) {
            pass = false;
            detail += std::string("; reference PLY failed to load: ") + e.what();
        }
    } else {
        detail += "; no reference PLY provided (GAMES_REFERENCE_PLY / GAMES_DATA_DIR), skipped";
    }
    return {pass, detail};
}

Outcome subdivision() {
    const TriMesh mesh = fixtures::oversizedFaceFixture();
    const double threshold = 0.1; // unit-area face: 1 -> 0.25 -> 0.0625 takes two rounds
    const TriMesh out = subdivideLargeFaces(mesh, threshold);
    // Round 1 splits one face (+3), round 2 splits its four children (+12).
    const std::size_t expected = mesh.faces.size() + 3 + 4 * 3;
    const double a0 = surfaceArea(mesh), a1 = surfaceArea(out);
    const double rel = std::abs(a1 - a0) / a0;
    double largest = 0.0;
    for (std::size_t f = 0; f < out.faces.size(); ++f)
        largest = std::max(largest, triangleArea(out.triangle(f)));
    return {mesh.faces.size() == 20 && out.faces.size() == expected && rel <= 1e-9 && largest <= threshold,
            "20 faces -> " + std::to_string(out.faces.size()) + " (expected " + std::to_string(expected) +
                "), rel area err " + fmt("%.2e", rel)};
}

Outcome throughput() {
    const auto scene = fixtures::renderScene(50000, 1012, false, 3);
    const Camera cam = sceneCamera(512);
    rasterize(scene, cam, Vec3::Zero()); // warm-up
    const int frames = 5;
    const auto t0 = Clock::now();
    for (int i = 0; i < frames; ++i)
        rasterize(scene, cam, Vec3::Zero());
    const double fps = frames / secondsSince(t0);
    return {fps >= 2.0, "50000 splats at 512x512, " + fmt("%.2f", fps) + " frames/s on " +
                            std::to_string(std::max(1u, std::thread::hardware_concurrency())) + " hardware thread(s)"};
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"soup round trip", soupRoundTrip},
        {"face basis orthonormality", faceBasisSweep},
        {"binding rigid equivariance", bindingEquivariance},
        {"face scale translation invariance and homogeneity", scalesInvariance},
        {"uniform scale multiplies planar covariance by 4", uniformScaleAlgebra},
        {"render determinism", renderDeterminism},
        {"render rigid equivariance", renderRigidEquivariance},
        {"soup render self-consistency", soupRenderConsistency},
        {"identity deformation render", identityDeformation},
        {"ply round trip", plyRoundTrip},
        {"subdivision area and face count", subdivision},
        {"cpu render throughput", throughput},
    };
    int failures = 0;
    for (const auto &[name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception &e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
    return failures == 0 ? 0 : 1;
}
