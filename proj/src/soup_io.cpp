// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "bytes.hpp"
#include "games/io.hpp"

#include <limits>

namespace games {

namespace {

using detail::ByteReader;
using detail::ByteWriter;
using Kind = FormatError::Kind;

std::uint32_t checkedCount(std::size_t n, const char *what) {
    if (n > std::numeric_limits<std::uint32_t>::max())
        throw ValidationError(std::string(what) + ": too many records for a 32-bit count");
    return static_cast<std::uint32_t>(n);
}

void expectMagic(ByteReader &in, std::string_view magic, const char *format) {
    if (in.remaining() < magic.size() || in.getBytes(magic.size()) != magic)
        throw FormatError(Kind::BadMagic, std::string(format) + ": bad magic bytes", 0);
}

std::uint8_t readDegree(ByteReader &in, const char *format) {
    const std::size_t at = in.offset();
    const auto degree = in.get<std::uint8_t>();
    if (degree > SphericalHarmonics::kMaxDegree)
        throw FormatError(Kind::Schema, std::string(format) + ": SH degree " + std::to_string(degree) + " > 3", at);
    return degree;
}

} // namespace

Bytes encodeSoup(const TriangleSoup &soup) {
    validateSoup(soup);
    Bytes out;
    ByteWriter w(out);
    w.putBytes(kSoupMagic);
    w.put(checkedCount(soup.size(), "soup"));
    for (std::size_t i = 0; i < soup.size(); ++i) {
        const OrientedTriangle &t = soup.triangles[i];
        for (const Vec3 *v : {&t.v1, &t.v2, &t.v3})
            for (int c = 0; c < 3; ++c)
                w.put(float((*v)(c)));
        w.put(float(soup.attrs[i].opacity));
        const auto &sh = soup.attrs[i].sh;
        w.put(static_cast<std::uint8_t>(sh.degree()));
        for (const Vec3 &c : sh.coeffs)
            for (int ch = 0; ch < 3; ++ch)
                w.put(float(c(ch)));
    }
    return out;
}

TriangleSoup decodeSoup(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes, "soup");
    expectMagic(in, kSoupMagic, "soup");
    const auto count = in.get<std::uint32_t>();
    TriangleSoup soup;
    // Smallest possible record: 9 + 1 floats and a degree byte.
    if (std::uint64_t(count) * 41 > in.remaining())
        throw FormatError(Kind::TruncatedPayload,
                          "soup: header declares " + std::to_string(count) + " triangles but payload is too short",
                          in.offset());
    soup.triangles.reserve(count);
    soup.attrs.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Vec3 v[3];
        for (auto &p : v)
            for (int c = 0; c < 3; ++c)
                p(c) = in.get<float>();
        soup.triangles.push_back({v[0], v[1], v[2]});
        SoupAttributes a;
        a.opacity = in.get<float>();
        a.sh = SphericalHarmonics::withDegree(readDegree(in, "soup"));
        for (Vec3 &c : a.sh.coeffs)
            for (int ch = 0; ch < 3; ++ch)
                c(ch) = in.get<float>();
        soup.attrs.push_back(std::move(a));
    }
    in.expectEnd();
    return soup;
}

void saveSoup(const TriangleSoup &soup, const std::filesystem::path &path) { writeFileBytes(path, encodeSoup(soup)); }

TriangleSoup loadSoup(const std::filesystem::path &path) { return decodeSoup(readFileBytes(path)); }

Bytes encodeBindings(const BoundScene &scene) {
    Bytes out;
    ByteWriter w(out);
    w.putBytes(kBindingsMagic);
    w.put(checkedCount(scene.mesh.vertices.size(), "bindings"));
    w.put(checkedCount(scene.mesh.faces.size(), "bindings"));
    w.put(checkedCount(scene.bindings.size(), "bindings"));
    for (const Vec3 &v : scene.mesh.vertices)
        for (int c = 0; c < 3; ++c)
            w.put(v(c));
    for (const Face &f : scene.mesh.faces)
        for (auto idx : f)
            w.put(idx);
    for (const FaceBinding &b : scene.bindings) {
        w.put(b.faceIndex);
        for (int c = 0; c < 3; ++c)
            w.put(b.alphas(c));
        w.put(b.rho);
        w.put(b.opacity);
        w.put(static_cast<std::uint8_t>(b.sh.degree()));
        for (const Vec3 &c : b.sh.coeffs)
            for (int ch = 0; ch < 3; ++ch)
                w.put(c(ch));
    }
    return out;
}

BoundScene decodeBindings(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes, "bindings");
    expectMagic(in, kBindingsMagic, "bindings");
    const auto nv = in.get<std::uint32_t>();
    const auto nf = in.get<std::uint32_t>();
    const auto nb = in.get<std::uint32_t>();
    const std::uint64_t minimum = std::uint64_t(nv) * 24 + std::uint64_t(nf) * 12 + std::uint64_t(nb) * 61;
    if (minimum > in.remaining())
        throw FormatError(Kind::TruncatedPayload, "bindings: counts exceed payload length", in.offset());

    BoundScene scene;
    scene.mesh.vertices.resize(nv);
    for (Vec3 &v : scene.mesh.vertices)
        for (int c = 0; c < 3; ++c)
            v(c) = in.get<double>();
    scene.mesh.faces.resize(nf);
    for (Face &f : scene.mesh.faces)
        for (auto &idx : f)
            idx = in.get<std::uint32_t>();
    scene.bindings.resize(nb);
    for (FaceBinding &b : scene.bindings) {
        const std::size_t at = in.offset();
        b.faceIndex = in.get<std::uint32_t>();
        if (b.faceIndex >= nf)
            throw FormatError(Kind::Schema, "bindings: face index out of range", at);
        for (int c = 0; c < 3; ++c)
            b.alphas(c) = in.get<double>();
        b.rho = in.get<double>();
        b.opacity = in.get<double>();
        b.sh = SphericalHarmonics::withDegree(readDegree(in, "bindings"));
        for (Vec3 &c : b.sh.coeffs)
            for (int ch = 0; ch < 3; ++ch)
                c(ch) = in.get<double>();
    }
    in.expectEnd();
    validateMesh(scene.mesh);
    return scene;
}

void saveBindings(const BoundScene &scene, const std::filesystem::path &path) {
    writeFileBytes(path, encodeBindings(scene));
}

BoundScene loadBindings(const std::filesystem::path &path) { return decodeBindings(readFileBytes(path)); }

} // namespace games
