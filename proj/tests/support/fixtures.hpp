// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic scene generators and scratch directories shared by the unit
// and acceptance tests.
//
#pragma once

#include "games/face_param.hpp"
#include "games/render.hpp"
#include "games/types.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace games::fixtures {

using Rng = std::mt19937_64;

double uniform(Rng &rng, double lo, double hi);
Vec3 uniformVec(Rng &rng, double lo, double hi);
Quat randomUnitQuat(Rng &rng);
Mat3 randomRotation(Rng &rng);

/// Vertices in [-1, 1]^3 with twice-area at least 1e-3.
OrientedTriangle randomTriangle(Rng &rng);

/// Flat Gaussians: s2, s3 in [0.01, 10], means in [-10, 10]^3, degree-1 SH.
std::vector<SplatGaussian> randomFlatSplats(std::size_t n, std::uint64_t seed);

/// A compact cloud inside the unit ball, suitable for rendering.
std::vector<SplatGaussian> renderScene(std::size_t n, std::uint64_t seed, bool flat, int shDegree = 0);

/// Latitude/longitude sphere: 2·segments cap faces plus 2·segments per inner
/// band. segments = 10, rings = 6 gives 100 faces.
TriMesh uvSphere(int segments, int rings, double radius = 1.0);

/// 19 small triangles plus one unit-area triangle (face 7).
TriMesh oversizedFaceFixture();
inline constexpr std::size_t kOversizedFace = 7;

/// Camera on a circle of the given radius in the y = 0 plane, looking at the
/// origin with +y up.
Camera orbitCamera(double angle, double radius, int width, int height, double focal);

/// transforms.json text for cameras at the given orbit angles.
std::string transformsJson(const std::vector<double> &angles, double radius, double cameraAngleX);

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const { return mPath; }
    std::filesystem::path operator/(const std::string &name) const { return mPath / name; }

private:
    std::filesystem::path mPath;
};

void writeText(const std::filesystem::path &path, const std::string &text);

} // namespace games::fixtures
