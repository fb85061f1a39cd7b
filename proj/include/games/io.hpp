// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
// File codecs. Binary formats are little-endian and documented in
// docs/formats.md.
//
#pragma once

#include "games/deform.hpp"
#include "games/face_param.hpp"
#include "games/render.hpp"
#include "games/soup.hpp"
#include "games/types.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace games {

using Bytes = std::vector<std::uint8_t>;

Bytes readFileBytes(const std::filesystem::path &path);
void writeFileBytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);

// -- Splat PLY ------------------------------------------------------------------

/// Splats decoded from a PLY file, together with the header and float32
/// records exactly as stored. Saving reuses a stored record whenever its
/// splat is unchanged, which makes load followed by save byte-exact even for
/// files whose quaternions were never normalised.
struct SplatCloud {
    std::vector<SplatGaussian> splats;
    int shDegree = 0;
    std::string header;
    std::vector<float> stored;
};

/// Number of float32 properties per vertex for an SH degree.
std::size_t plyPropertyCount(int shDegree);
std::vector<std::string> plyPropertyNames(int shDegree);

SplatCloud decodeSplatPly(std::span<const std::uint8_t> bytes);
Bytes encodeSplatPly(const SplatCloud &cloud);
/// Canonical encoding: generated header, quaternions written normalised.
Bytes encodeSplatPly(std::span<const SplatGaussian> splats);

SplatCloud loadSplats(const std::filesystem::path &path);
void saveSplats(const SplatCloud &cloud, const std::filesystem::path &path);
void saveSplats(std::span<const SplatGaussian> splats, const std::filesystem::path &path);

// -- OBJ ------------------------------------------------------------------------

/// v/f records only; polygons are fan-triangulated (1,2,3),(1,3,4),...;
/// negative indices count back from the latest vertex.
TriMesh parseMeshObj(std::string_view text);
TriMesh loadMeshObj(const std::filesystem::path &path);

// -- NeRF-synthetic cameras ------------------------------------------------------

/// transforms.json: camera_angle_x plus per-frame OpenGL camera-to-world
/// matrices. `width`/`height` apply unless the file carries w/h.
std::vector<Camera> parseCameras(std::string_view json, int width = 800, int height = 800);
std::vector<Camera> loadCameras(const std::filesystem::path &path, int width = 800, int height = 800);

// -- Triangle soup and bindings ---------------------------------------------------

inline constexpr std::string_view kSoupMagic{"GMSOUP1\0", 8};
inline constexpr std::string_view kBindingsMagic{"GMBIND1\0", 8};

Bytes encodeSoup(const TriangleSoup &soup);
TriangleSoup decodeSoup(std::span<const std::uint8_t> bytes);
void saveSoup(const TriangleSoup &soup, const std::filesystem::path &path);
TriangleSoup loadSoup(const std::filesystem::path &path);

Bytes encodeBindings(const BoundScene &scene);
BoundScene decodeBindings(std::span<const std::uint8_t> bytes);
void saveBindings(const BoundScene &scene, const std::filesystem::path &path);
BoundScene loadBindings(const std::filesystem::path &path);

// -- Deformation specs -------------------------------------------------------------

/// YAML with a top-level `steps` list. Schema errors carry line and column.
DeformSpec parseDeformSpec(std::string_view yaml);
DeformSpec loadDeformSpec(const std::filesystem::path &path);

/// YAML with a top-level `keyframes` list; a bare `steps` document becomes a
/// single keyframe at time 0.
Keyframes parseKeyframes(std::string_view yaml);
Keyframes loadKeyframes(const std::filesystem::path &path);

// -- PNG -------------------------------------------------------------------------

/// 8-bit RGBA, channels quantised by round(255·v).
Bytes encodePng(const ImageBuffer &img);
ImageBuffer decodePng(std::span<const std::uint8_t> bytes);
void writePng(const ImageBuffer &img, const std::filesystem::path &path);
ImageBuffer readPng(const std::filesystem::path &path);

} // namespace games
