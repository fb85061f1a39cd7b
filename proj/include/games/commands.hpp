// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
// Subcommands of the `games` tool. Each returns the process exit code and
// writes only to the given streams, so tests can drive them in-process.
//
#pragma once

#include "games/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace games {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kIo = 2;
inline constexpr int kDegenerate = 3;
inline constexpr int kNoMatches = 4;
} // namespace exit_code

struct BindOptions {
    std::filesystem::path mesh;
    std::uint32_t k = 1;
    std::uint64_t seed = 0;
    std::filesystem::path out;
    int shDegree = 0;
    /// Set: subdivide first. A non-positive threshold means half the largest
    /// face area.
    std::optional<double> subdivideArea;
};

struct ExtractSoupOptions {
    std::filesystem::path ply;
    std::filesystem::path out;
    bool skipDegenerate = false;
};

struct RenderCommandOptions {
    std::filesystem::path scene;
    std::filesystem::path cameras;
    std::filesystem::path outDir;
    int width = 800;
    int height = 800;
    Vec3 background = Vec3::Zero();
    std::optional<std::filesystem::path> deform;
    double time = 0.0;
    unsigned threads = 0;
};

struct MetricsOptions {
    std::filesystem::path dirA;
    std::filesystem::path dirB;
};

struct ServeOptions {
    std::filesystem::path scene;
    std::string host = "127.0.0.1";
    std::uint16_t port = 7421;
    std::optional<std::filesystem::path> cameras;
    int width = 512;
    int height = 512;
    Vec3 background = Vec3::Zero();
};

int cmdBind(const BindOptions &opt, std::ostream &out, std::ostream &err);
int cmdExtractSoup(const ExtractSoupOptions &opt, std::ostream &out, std::ostream &err);
int cmdRender(const RenderCommandOptions &opt, std::ostream &out, std::ostream &err);
int cmdMetrics(const MetricsOptions &opt, std::ostream &out, std::ostream &err);
/// Blocks until the process is interrupted.
int cmdServe(const ServeOptions &opt, std::ostream &out, std::ostream &err);

/// "r,g,b" or a single grey value, components in [0, 1].
Vec3 parseColor(const std::string &text);

} // namespace games
