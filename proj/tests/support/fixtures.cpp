// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

namespace games::fixtures {

double uniform(Rng &rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vec3 uniformVec(Rng &rng, double lo, double hi) {
    const double x = uniform(rng, lo, hi);
    const double y = uniform(rng, lo, hi);
    const double z = uniform(rng, lo, hi);
    return {x, y, z};
}

Quat randomUnitQuat(Rng &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
        const double w = n(rng), x = n(rng), y = n(rng), z = n(rng);
        Quat q(w, x, y, z);
        if (q.norm() > 1e-3) {
            q.normalize();
            return canonicalQuat(q);
        }
    }
}

Mat3 randomRotation(Rng &rng) { return quatToMatrix(randomUnitQuat(rng)); }

OrientedTriangle randomTriangle(Rng &rng) {
    for (;;) {
        OrientedTriangle t{uniformVec(rng, -1, 1), uniformVec(rng, -1, 1), uniformVec(rng, -1, 1)};
        if (edgeCross(t).norm() >= 1e-3)
            return t;
    }
}

std::vector<SplatGaussian> randomFlatSplats(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<SplatGaussian> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SplatGaussian g;
        g.mean = uniformVec(rng, -10, 10);
        g.rotation = randomUnitQuat(rng);
        const double s2 = uniform(rng, 0.01, 10.0);
        const double s3 = uniform(rng, 0.01, 10.0);
        g.scale = {kFlatEpsilon, s2, s3};
        g.opacity = uniform(rng, 0.05, 0.95);
        g.sh = SphericalHarmonics::withDegree(1);
        for (auto &c : g.sh.coeffs)
            c = uniformVec(rng, -0.5, 0.5);
        out.push_back(g);
    }
    return out;
}

std::vector<SplatGaussian> renderScene(std::size_t n, std::uint64_t seed, bool flat, int shDegree) {
    Rng rng(seed);
    std::vector<SplatGaussian> out;
    out.reserve(n);
    while (out.size() < n) {
        const Vec3 p = uniformVec(rng, -1, 1);
        if (p.squaredNorm() > 1.0)
            continue;
        SplatGaussian g;
        g.mean = p;
        g.rotation = randomUnitQuat(rng);
        const double s1 = uniform(rng, 0.02, 0.08);
        const double s2 = uniform(rng, 0.02, 0.08);
        const double s3 = uniform(rng, 0.02, 0.08);
        g.scale = flat ? Vec3(kFlatEpsilon, s2, s3) : Vec3(s1, s2, s3);
        g.opacity = uniform(rng, 0.3, 0.9);
        g.sh = SphericalHarmonics::withDegree(shDegree);
        g.sh.coeffs[0] = uniformVec(rng, -1.2, 1.2);
        for (std::size_t k = 1; k < g.sh.coeffs.size(); ++k)
            g.sh.coeffs[k] = uniformVec(rng, -0.2, 0.2);
        out.push_back(g);
    }
    return out;
}

TriMesh uvSphere(int segments, int rings, double radius) {
    TriMesh mesh;
    const double pi = std::numbers::pi;
    mesh.vertices.emplace_back(0.0, radius, 0.0); // north pole
    for (int r = 1; r < rings; ++r) {
        const double theta = pi * r / rings;
        for (int s = 0; s < segments; ++s) {
            const double phi = 2.0 * pi * s / segments;
            mesh.vertices.emplace_back(radius * std::sin(theta) * std::cos(phi), radius * std::cos(theta),
                                       radius * std::sin(theta) * std::sin(phi));
        }
    }
    mesh.vertices.emplace_back(0.0, -radius, 0.0);
    const auto ring = [&](int r, int s) { return std::uint32_t(1 + (r - 1) * segments + (s % segments)); };
    const auto south = std::uint32_t(mesh.vertices.size() - 1);

    for (int s = 0; s < segments; ++s)
        mesh.faces.push_back({0, ring(1, s + 1), ring(1, s)});
    for (int r = 1; r + 1 < rings; ++r)
        for (int s = 0; s < segments; ++s) {
            mesh.faces.push_back({ring(r, s), ring(r, s + 1), ring(r + 1, s)});
            mesh.faces.push_back({ring(r, s + 1), ring(r + 1, s + 1), ring(r + 1, s)});
        }
    for (int s = 0; s < segments; ++s)
        mesh.faces.push_back({south, ring(rings - 1, s), ring(rings - 1, s + 1)});
    return mesh;
}

TriMesh oversizedFaceFixture() {
    TriMesh mesh;
    // A strip of 19 small triangles along +x, area 0.005 each.
    for (int i = 0; i <= 10; ++i) {
        mesh.vertices.emplace_back(0.1 * i, 0.0, 0.0);
        mesh.vertices.emplace_back(0.1 * i, 0.1, 0.0);
    }
    std::vector<Face> strip;
    for (std::uint32_t i = 0; i < 10; ++i) {
        strip.push_back({2 * i, 2 * i + 2, 2 * i + 1});
        strip.push_back({2 * i + 2, 2 * i + 3, 2 * i + 1});
    }
    strip.pop_back();
    // The big face: right triangle with legs sqrt(2), area 1.
    const auto base = std::uint32_t(mesh.vertices.size());
    const double leg = std::sqrt(2.0);
    mesh.vertices.emplace_back(0.0, 1.0, 0.5);
    mesh.vertices.emplace_back(leg, 1.0, 0.5);
    mesh.vertices.emplace_back(0.0, 1.0 + leg, 0.5);
    for (std::size_t f = 0; f < strip.size(); ++f) {
        if (f == kOversizedFace)
            mesh.faces.push_back({base, base + 1, base + 2});
        mesh.faces.push_back(strip[f]);
    }
    return mesh;
}

Camera orbitCamera(double angle, double radius, int width, int height, double focal) {
    const Vec3 eye(radius * std::sin(angle), 0.0, -radius * std::cos(angle));
    return Camera::lookAt(eye, Vec3::Zero(), Vec3::UnitY(), focal, width, height);
}

std::string transformsJson(const std::vector<double> &angles, double radius, double cameraAngleX) {
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"camera_angle_x\": " << cameraAngleX << ",\n  \"frames\": [\n";
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const Vec3 eye(radius * std::sin(angles[i]), 0.0, -radius * std::cos(angles[i]));
        // OpenGL camera-to-world: columns right, up, back, position.
        const Vec3 back = eye.normalized();
        const Vec3 right = Vec3::UnitY().cross(back).normalized();
        const Vec3 up = back.cross(right);
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m.block<3, 1>(0, 0) = right;
        m.block<3, 1>(0, 1) = up;
        m.block<3, 1>(0, 2) = back;
        m.block<3, 1>(0, 3) = eye;
        os << "    {\"file_path\": \"./r_" << i << "\", \"transform_matrix\": [";
        for (int r = 0; r < 4; ++r) {
            os << (r ? ", " : "") << "[";
            for (int c = 0; c < 4; ++c)
                os << (c ? ", " : "") << m(r, c);
            os << "]";
        }
        os << "]}" << (i + 1 < angles.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    mPath = std::filesystem::temp_directory_path() /
            ("games-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(mPath);
    std::filesystem::create_directories(mPath);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(mPath, ec);
}

void writeText(const std::filesystem::path &path, const std::string &text) {
    std::ofstream(path, std::ios::binary) << text;
}

} // namespace games::fixtures
