// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
// Editor protocol. Every message is a frame:
//
//   u32 little-endian payload length N, then N payload bytes.
//   payload[0] == 'J': UTF-8 JSON control message follows.
//   payload[0] == 'I': u32 width, u32 height, PNG bytes.
//
// See docs/protocol.md for the message vocabulary.
//
#pragma once

#include "games/render.hpp"
#include "games/session.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace games::protocol {

inline constexpr int kVersion = 1;
inline constexpr std::uint32_t kMaxFrameBytes = 256u << 20;

enum class FrameKind : std::uint8_t { Json = 'J', Image = 'I' };

struct Frame {
    FrameKind kind = FrameKind::Json;
    nlohmann::json json;
    int width = 0, height = 0;
    std::vector<std::uint8_t> png;
};

std::vector<std::uint8_t> encodeJsonFrame(const nlohmann::json &message);
std::vector<std::uint8_t> encodeImageFrame(int width, int height, std::span<const std::uint8_t> png);

/// Decodes one payload (without the length prefix). Throws FormatError.
Frame decodePayload(std::span<const std::uint8_t> payload);

/// Blocking socket helpers. Reads return nullopt on a clean EOF before the
/// length prefix; a short read mid-frame throws IoError and an out-of-bounds
/// length throws FormatError.
std::optional<std::vector<std::uint8_t>> readPayload(int fd);
std::optional<Frame> readFrame(int fd);
void writeBytes(int fd, std::span<const std::uint8_t> bytes);

nlohmann::json cameraToJson(const Camera &cam);
Camera cameraFromJson(const nlohmann::json &j);

nlohmann::json helloMessage(const SceneSession &session);

/// Outcome of a control message. When `render` is set the caller must render
/// the captured snapshot and send an image frame instead of `reply`.
struct ControlResult {
    nlohmann::json reply;
    bool render = false;
    std::shared_ptr<const Scene> snapshot;
    Camera camera;
    Vec3 background = Vec3::Zero();
};

/// Applies one control message to the session. Malformed requests and
/// rejected edits produce an error reply; the session is left unchanged.
ControlResult handleControl(SceneSession &session, const nlohmann::json &request, const Vec3 &defaultBackground);

/// Renders a captured snapshot to an image frame.
std::vector<std::uint8_t> renderFrame(const Scene &scene, const Camera &camera, const Vec3 &background);

} // namespace games::protocol
