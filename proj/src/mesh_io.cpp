// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/errors.hpp"
#include "games/io.hpp"

#include <Eigen/SVD>
#include <json.hpp>

#include <charconv>
#include <cmath>

namespace games {

namespace {

using Kind = FormatError::Kind;

struct Token {
    std::string_view text;
    std::size_t column; // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > start)
            out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

double parseNumber(const Token &t, std::size_t line) {
    double v = 0.0;
    const char *begin = t.text.data();
    const char *end = begin + t.text.size();
    if (*begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw FormatError(Kind::Syntax, "obj: '" + std::string(t.text) + "' is not a number", line, t.column);
    return v;
}

std::uint32_t parseIndex(const Token &t, std::size_t vertexCount, std::size_t line) {
    const std::string_view head = t.text.substr(0, t.text.find('/'));
    long long idx = 0;
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
    if (ec != std::errc() || ptr != head.data() + head.size() || idx == 0)
        throw FormatError(Kind::Syntax, "obj: bad face index '" + std::string(t.text) + "'", line, t.column);
    const long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(vertexCount) + idx;
    if (resolved < 0 || resolved >= static_cast<long long>(vertexCount))
        throw FormatError(Kind::Schema,
                          "obj: face index " + std::to_string(idx) + " out of range (" +
                              std::to_string(vertexCount) + " vertices so far)",
                          line, t.column);
    return static_cast<std::uint32_t>(resolved);
}

Mat3 matrixBlock(const nlohmann::json &m, std::size_t frame, Eigen::Vector4d *lastColumn) {
    if (!m.is_array() || m.size() != 4)
        throw IoError("cameras: frame " + std::to_string(frame) + " transform_matrix is not 4x4");
    Eigen::Matrix4d t;
    for (int r = 0; r < 4; ++r) {
        if (!m[r].is_array() || m[r].size() != 4)
            throw IoError("cameras: frame " + std::to_string(frame) + " transform_matrix is not 4x4");
        for (int c = 0; c < 4; ++c) {
            if (!m[r][c].is_number())
                throw IoError("cameras: frame " + std::to_string(frame) + " transform_matrix has a non-number");
            t(r, c) = m[r][c].get<double>();
        }
    }
    *lastColumn = t.col(3);
    return t.block<3, 3>(0, 0);
}

} // namespace

TriMesh parseMeshObj(std::string_view text) {
    TriMesh mesh;
    std::size_t lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineNo;

        const auto tokens = tokenize(line);
        if (tokens.empty() || tokens[0].text.starts_with('#'))
            continue;
        if (tokens[0].text == "v") {
            if (tokens.size() < 4)
                throw FormatError(Kind::Syntax, "obj: vertex needs three coordinates", lineNo, tokens[0].column);
            mesh.vertices.emplace_back(parseNumber(tokens[1], lineNo), parseNumber(tokens[2], lineNo),
                                       parseNumber(tokens[3], lineNo));
        } else if (tokens[0].text == "f") {
            if (tokens.size() < 4)
                throw FormatError(Kind::Syntax, "obj: face needs at least three vertices", lineNo, tokens[0].column);
            std::vector<std::uint32_t> poly;
            for (std::size_t i = 1; i < tokens.size(); ++i)
                poly.push_back(parseIndex(tokens[i], mesh.vertices.size(), lineNo));
            for (std::size_t i = 1; i + 1 < poly.size(); ++i)
                mesh.faces.push_back({poly[0], poly[i], poly[i + 1]});
        }
        // vt, vn, o, g, s, usemtl, mtllib, l, p: not needed here.
    }
    validateMesh(mesh);
    return mesh;
}

TriMesh loadMeshObj(const std::filesystem::path &path) {
    const Bytes bytes = readFileBytes(path);
    return parseMeshObj({reinterpret_cast<const char *>(bytes.data()), bytes.size()});
}

std::vector<Camera> parseCameras(std::string_view text, int width, int height) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw FormatError(Kind::Syntax, std::string("cameras: ") + e.what(), e.byte);
    }
    if (!doc.is_object() || !doc.contains("camera_angle_x") || !doc["camera_angle_x"].is_number())
        throw IoError("cameras: missing numeric camera_angle_x");
    if (!doc.contains("frames") || !doc["frames"].is_array())
        throw IoError("cameras: missing frames array");
    if (doc.contains("w"))
        width = doc["w"].get<int>();
    if (doc.contains("h"))
        height = doc["h"].get<int>();

    const double angleX = doc["camera_angle_x"].get<double>();
    const double focal = 0.5 * width / std::tan(0.5 * angleX);

    // OpenGL camera axes (x right, y up, looking down -z) to x right, y down, +z forward.
    const Mat3 flip = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();

    std::vector<Camera> cameras;
    const auto &frames = doc["frames"];
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (!frames[i].contains("transform_matrix"))
            throw IoError("cameras: frame " + std::to_string(i) + " lacks transform_matrix");
        Eigen::Vector4d last;
        const Mat3 rot = matrixBlock(frames[i]["transform_matrix"], i, &last);
        if (std::abs(rot.determinant()) < 1e-12)
            throw IoError("cameras: frame " + std::to_string(i) + " transform_matrix is not invertible");
        if (!isOrthonormal(rot, 1e-4))
            throw IoError("cameras: frame " + std::to_string(i) + " transform_matrix is not a rigid transform");
        if (rot.determinant() < 0.0)
            throw IoError("cameras: frame " + std::to_string(i) + " transform_matrix is a reflection");

        // Stored matrices are rounded; snap to the nearest rotation.
        const Eigen::JacobiSVD<Mat3> svd(rot, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Mat3 camToWorld = svd.matrixU() * svd.matrixV().transpose() * flip;
        Camera cam;
        cam.rotation = camToWorld.transpose();
        cam.translation = -(cam.rotation * last.head<3>());
        cam.fx = doc.contains("fl_x") ? doc["fl_x"].get<double>() : focal;
        cam.fy = doc.contains("fl_y") ? doc["fl_y"].get<double>() : cam.fx;
        cam.cx = doc.contains("cx") ? doc["cx"].get<double>() : 0.5 * width;
        cam.cy = doc.contains("cy") ? doc["cy"].get<double>() : 0.5 * height;
        cam.width = width;
        cam.height = height;
        validateCamera(cam);
        cameras.push_back(cam);
    }
    return cameras;
}

std::vector<Camera> loadCameras(const std::filesystem::path &path, int width, int height) {
    const Bytes bytes = readFileBytes(path);
    return parseCameras({reinterpret_cast<const char *>(bytes.data()), bytes.size()}, width, height);
}

} // namespace games
