// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "games/deform.hpp"
#include "games/face_param.hpp"
#include "games/render.hpp"
#include "games/soup.hpp"

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace games {

/// Anything the tools can render: a mesh with bound Gaussians, a triangle
/// soup, or plain splats (not editable).
using Scene = std::variant<BoundScene, TriangleSoup, std::vector<SplatGaussian>>;

/// Picks the codec from the file's leading bytes (GMBIND1, GMSOUP1 or ply).
Scene loadScene(const std::filesystem::path &path);

std::string sceneKindName(const Scene &scene);

std::vector<SplatGaussian> realizeScene(const Scene &scene);
std::size_t splatCount(const Scene &scene);

/// Editable vertices: mesh vertices, or 3 per soup triangle. Plain splats
/// have none.
std::vector<Vec3> sceneVertices(const Scene &scene);

/// Throws ValidationError for plain splats; otherwise as applyDeform.
Scene deformScene(const Scene &scene, const DeformSpec &spec);

/// Flattens and extracts a soup, skipping degenerate splats.
TriangleSoup soupFromSplats(std::span<const SplatGaussian> splats, std::size_t *dropped = nullptr);

/// A camera framing the scene's bounding sphere from the -z side.
Camera defaultCamera(const Scene &scene, int width, int height);

} // namespace games
