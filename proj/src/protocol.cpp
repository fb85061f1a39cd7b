// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/protocol.hpp"

#include "games/errors.hpp"
#include "games/io.hpp"

#include <cerrno>
#include <cstring>
#include <numbers>
#include <sys/socket.h>
#include <unistd.h>

namespace games::protocol {

namespace {

using nlohmann::json;

void appendU32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(std::uint8_t(v >> (8 * i)));
}

std::uint32_t readU32(const std::uint8_t *p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

// Reads exactly n bytes. Returns false on EOF before the first byte.
bool readExact(int fd, std::uint8_t *dst, std::size_t n, bool eofOk) {
    std::size_t got = 0;
    while (got < n) {
        const ssize_t r = ::recv(fd, dst + got, n - got, 0);
        if (r == 0) {
            if (got == 0 && eofOk)
                return false;
            throw IoError("connection closed mid-frame");
        }
        if (r < 0) {
            if (errno == EINTR)
                continue;
            throw IoError(std::string("recv failed: ") + std::strerror(errno));
        }
        got += std::size_t(r);
    }
    return true;
}

Vec3 vec3(const json &j, const char *what) {
    if (!j.is_array() || j.size() != 3)
        throw ValidationError(std::string(what) + " must be an array of three numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3Json(const Vec3 &v) { return json::array({v.x(), v.y(), v.z()}); }

std::vector<std::uint32_t> targetIndices(const SceneSession &session, const json &request) {
    std::vector<std::uint32_t> indices;
    if (request.contains("indices")) {
        indices = request["indices"].get<std::vector<std::uint32_t>>();
        for (auto i : indices)
            if (i >= session.vertexCount())
                throw ValidationError("vertex index " + std::to_string(i) + " out of range");
    } else {
        indices = session.selection();
    }
    if (indices.empty())
        throw ValidationError("no vertices selected");
    return indices;
}

json stateReply(const SceneSession &session, const std::string &request) {
    return {{"type", "ok"},
            {"request", request},
            {"undo_depth", session.undoDepth()},
            {"redo_depth", session.redoDepth()},
            {"vertex_count", session.vertexCount()},
            {"splat_count", splatCount(session.scene())}};
}

json errorReply(const std::string &request, const std::string &code, const std::string &message) {
    return {{"type", "error"}, {"request", request}, {"code", code}, {"message", message}};
}

Quat rotationFrom(const json &request) {
    if (request.contains("rotation")) {
        const auto &q = request["rotation"];
        if (!q.is_array() || q.size() != 4)
            throw ValidationError("rotation must be a quaternion [w, x, y, z]");
        Quat r(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>());
        if (!(r.norm() > 1e-12))
            throw ValidationError("rotation quaternion has zero length");
        return r.normalized();
    }
    if (request.contains("axis")) {
        const Vec3 axis = vec3(request["axis"], "axis");
        if (!(axis.norm() > 1e-12))
            throw ValidationError("axis has zero length");
        const double degrees = request.value("degrees", 0.0);
        return Quat(Eigen::AngleAxisd(degrees * std::numbers::pi / 180.0, axis.normalized()));
    }
    return Quat::Identity();
}

ControlResult dispatch(SceneSession &session, const json &request, const std::string &type,
                       const Vec3 &defaultBackground) {
    ControlResult result;
    if (type == "hello") {
        result.reply = helloMessage(session);
    } else if (type == "load") {
        session.replace(loadScene(request.at("path").get<std::string>()));
        result.reply = stateReply(session, type);
        result.reply["kind"] = sceneKindName(session.scene());
    } else if (type == "select") {
        if (request.contains("indices"))
            session.select(VertexSelector::of(request["indices"].get<std::vector<std::uint32_t>>()));
        else if (request.contains("box"))
            session.select(VertexSelector::box(vec3(request["box"].at("min"), "box.min"),
                                               vec3(request["box"].at("max"), "box.max")));
        else
            session.select(VertexSelector::all());
        result.reply = stateReply(session, type);
        result.reply["selected"] = session.selection().size();
    } else if (type == "move_vertices") {
        const auto indices = targetIndices(session, request);
        DeformSpec spec;
        if (request.contains("positions")) {
            VertexSetStep set;
            set.indices = indices;
            for (const auto &p : request["positions"])
                set.positions.push_back(vec3(p, "position"));
            spec.steps.push_back(std::move(set));
        } else {
            RigidStep move;
            move.translation = vec3(request.at("delta"), "delta");
            move.select = VertexSelector::of(indices);
            spec.steps.push_back(std::move(move));
        }
        session.edit(spec);
        result.reply = stateReply(session, type);
    } else if (type == "transform_group") {
        const auto indices = targetIndices(session, request);
        Vec3 pivot = Vec3::Zero();
        if (request.contains("pivot")) {
            pivot = vec3(request["pivot"], "pivot");
        } else {
            const auto vertices = sceneVertices(session.scene());
            for (auto i : indices)
                pivot += vertices[i];
            pivot /= double(indices.size());
        }
        DeformSpec spec;
        if (request.contains("scale")) {
            ScaleStep scale;
            scale.factors = request["scale"].is_number() ? Vec3::Constant(request["scale"].get<double>())
                                                         : vec3(request["scale"], "scale");
            scale.pivot = pivot;
            scale.select = VertexSelector::of(indices);
            spec.steps.push_back(std::move(scale));
        }
        RigidStep rigid;
        rigid.rotation = rotationFrom(request);
        rigid.translation = request.contains("translation") ? vec3(request["translation"], "translation") : Vec3::Zero();
        rigid.pivot = pivot;
        rigid.select = VertexSelector::of(indices);
        spec.steps.push_back(std::move(rigid));
        session.edit(spec);
        result.reply = stateReply(session, type);
    } else if (type == "set_camera") {
        session.setCamera(cameraFromJson(request.at("camera")));
        result.reply = stateReply(session, type);
        result.reply["camera"] = cameraToJson(session.camera());
    } else if (type == "render") {
        result.render = true;
        result.snapshot = session.snapshot();
        result.camera = session.camera();
        result.background =
            request.contains("background") ? vec3(request["background"], "background") : defaultBackground;
    } else if (type == "undo" || type == "redo") {
        const bool moved = type == "undo" ? session.undo() : session.redo();
        if (!moved)
            result.reply = errorReply(type, "empty", "nothing to " + type);
        else
            result.reply = stateReply(session, type);
    } else {
        result.reply = errorReply(type, "protocol", "unknown message type '" + type + "'");
    }
    return result;
}

} // namespace

std::vector<std::uint8_t> encodeJsonFrame(const nlohmann::json &message) {
    const std::string text = message.dump();
    std::vector<std::uint8_t> out;
    out.reserve(text.size() + 5);
    appendU32(out, std::uint32_t(text.size() + 1));
    out.push_back(std::uint8_t(FrameKind::Json));
    out.insert(out.end(), text.begin(), text.end());
    return out;
}

std::vector<std::uint8_t> encodeImageFrame(int width, int height, std::span<const std::uint8_t> png) {
    std::vector<std::uint8_t> out;
    out.reserve(png.size() + 13);
    appendU32(out, std::uint32_t(png.size() + 9));
    out.push_back(std::uint8_t(FrameKind::Image));
    appendU32(out, std::uint32_t(width));
    appendU32(out, std::uint32_t(height));
    out.insert(out.end(), png.begin(), png.end());
    return out;
}

Frame decodePayload(std::span<const std::uint8_t> payload) {
    if (payload.empty())
        throw FormatError(FormatError::Kind::MalformedHeader, "protocol: empty frame", 0);
    Frame frame;
    switch (payload[0]) {
    case std::uint8_t(FrameKind::Json):
        frame.kind = FrameKind::Json;
        try {
            frame.json = nlohmann::json::parse(payload.begin() + 1, payload.end());
        } catch (const nlohmann::json::parse_error &e) {
            throw FormatError(FormatError::Kind::Syntax, std::string("protocol: ") + e.what(), e.byte);
        }
        break;
    case std::uint8_t(FrameKind::Image):
        if (payload.size() < 9)
            throw FormatError(FormatError::Kind::TruncatedPayload, "protocol: short image frame", payload.size());
        frame.kind = FrameKind::Image;
        frame.width = int(readU32(payload.data() + 1));
        frame.height = int(readU32(payload.data() + 5));
        frame.png.assign(payload.begin() + 9, payload.end());
        break;
    default:
        throw FormatError(FormatError::Kind::MalformedHeader, "protocol: unknown frame kind", 0);
    }
    return frame;
}

std::optional<std::vector<std::uint8_t>> readPayload(int fd) {
    std::uint8_t prefix[4];
    if (!readExact(fd, prefix, 4, true))
        return std::nullopt;
    const std::uint32_t length = readU32(prefix);
    if (length == 0 || length > kMaxFrameBytes)
        throw FormatError(FormatError::Kind::MalformedHeader,
                          "protocol: frame length " + std::to_string(length) + " out of bounds", 0);
    std::vector<std::uint8_t> payload(length);
    readExact(fd, payload.data(), length, false);
    return payload;
}

std::optional<Frame> readFrame(int fd) {
    const auto payload = readPayload(fd);
    if (!payload)
        return std::nullopt;
    return decodePayload(*payload);
}

void writeBytes(int fd, std::span<const std::uint8_t> bytes) {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        const ssize_t w = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (w < 0) {
            if (errno == EINTR)
                continue;
            throw IoError(std::string("send failed: ") + std::strerror(errno));
        }
        sent += std::size_t(w);
    }
}

nlohmann::json cameraToJson(const Camera &cam) {
    json rotation = json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            rotation.push_back(cam.rotation(r, c));
    return {{"width", cam.width}, {"height", cam.height}, {"fx", cam.fx},       {"fy", cam.fy},
            {"cx", cam.cx},       {"cy", cam.cy},         {"near", cam.near},   {"far", cam.far},
            {"rotation", rotation}, {"translation", vec3Json(cam.translation)}};
}

Camera cameraFromJson(const nlohmann::json &j) {
    Camera cam;
    cam.width = j.at("width").get<int>();
    cam.height = j.at("height").get<int>();
    cam.fx = j.at("fx").get<double>();
    cam.fy = j.at("fy").get<double>();
    cam.cx = j.value("cx", 0.5 * cam.width);
    cam.cy = j.value("cy", 0.5 * cam.height);
    cam.near = j.value("near", cam.near);
    cam.far = j.value("far", cam.far);
    const auto &r = j.at("rotation");
    if (!r.is_array() || r.size() != 9)
        throw ValidationError("camera rotation must be 9 numbers, row-major");
    for (int i = 0; i < 9; ++i)
        cam.rotation(i / 3, i % 3) = r[std::size_t(i)].get<double>();
    cam.translation = vec3(j.at("translation"), "camera translation");
    validateCamera(cam);
    return cam;
}

nlohmann::json helloMessage(const SceneSession &session) {
    return {{"type", "hello"},
            {"protocol", kVersion},
            {"session", session.id()},
            {"kind", sceneKindName(session.scene())},
            {"splat_count", splatCount(session.scene())},
            {"vertex_count", session.vertexCount()},
            {"undo_depth", session.undoDepth()},
            {"max_undo", session.maxUndo()},
            {"camera", cameraToJson(session.camera())}};
}

ControlResult handleControl(SceneSession &session, const nlohmann::json &request, const Vec3 &defaultBackground) {
    std::string type = "?";
    ControlResult result;
    try {
        if (!request.is_object() || !request.contains("type") || !request["type"].is_string())
            throw ValidationError("message needs a string 'type'");
        type = request["type"].get<std::string>();
        result = dispatch(session, request, type, defaultBackground);
    } catch (const json::exception &e) {
        result = {};
        result.reply = errorReply(type, "protocol", e.what());
    } catch (const IoError &e) {
        result = {};
        result.reply = errorReply(type, "io", e.what());
    } catch (const GeometryError &e) {
        result = {};
        result.reply = errorReply(type, "geometry", e.what());
    } catch (const ValidationError &e) {
        result = {};
        result.reply = errorReply(type, "validation", e.what());
    } catch (const Error &e) {
        result = {};
        result.reply = errorReply(type, "error", e.what());
    }
    if (request.is_object() && request.contains("id") && !result.render)
        result.reply["id"] = request["id"];
    return result;
}

std::vector<std::uint8_t> renderFrame(const Scene &scene, const Camera &camera, const Vec3 &background) {
    const auto splats = realizeScene(scene);
    const ImageBuffer img = rasterize(splats, camera, background);
    return encodeImageFrame(img.width, img.height, encodePng(img));
}

} // namespace games::protocol
