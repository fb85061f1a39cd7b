// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "bytes.hpp"
#include "games/io.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <fstream>
#include <sstream>

namespace games {

namespace {

using Kind = FormatError::Kind;

constexpr std::string_view kEndHeader = "end_header\n";

std::size_t restCount(int degree) { return 3 * (SphericalHarmonics::countForDegree(degree) - 1); }

double sigmoid(double x) {
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

float toStoredFloat(double v) { return float(std::clamp(v, double(-FLT_MAX), double(FLT_MAX))); }

float logit(double p) { return toStoredFloat(std::log(p) - std::log1p(-p)); }

SplatGaussian decodeRecord(const float *r, int degree, std::size_t recordOffset) {
    const std::size_t rest = restCount(degree) / 3;
    SplatGaussian g;
    g.mean = Vec3(r[0], r[1], r[2]);
    g.sh = SphericalHarmonics::withDegree(degree);
    g.sh.coeffs[0] = Vec3(r[6], r[7], r[8]);
    for (std::size_t k = 0; k < rest; ++k)
        for (std::size_t c = 0; c < 3; ++c)
            g.sh.coeffs[k + 1](long(c)) = r[9 + c * rest + k];
    const float *tail = r + 9 + 3 * rest;
    g.opacity = sigmoid(tail[0]);
    g.scale = Vec3(std::exp(double(tail[1])), std::exp(double(tail[2])), std::exp(double(tail[3])));
    const Quat q(tail[4], tail[5], tail[6], tail[7]);
    if (!(q.norm() > 0.0) || !std::isfinite(q.norm()))
        throw FormatError(Kind::Schema, "splat ply: zero or non-finite rotation quaternion", recordOffset);
    g.rotation = canonicalQuat(q);
    return g;
}

void encodeRecord(const SplatGaussian &g, int degree, float *r) {
    if (g.sh.degree() != degree)
        throw ValidationError("splat ply: all splats must share one SH degree");
    const std::size_t rest = restCount(degree) / 3;
    r[0] = float(g.mean.x());
    r[1] = float(g.mean.y());
    r[2] = float(g.mean.z());
    r[3] = r[4] = r[5] = 0.0f;
    for (int c = 0; c < 3; ++c)
        r[6 + c] = float(g.sh.coeffs[0](c));
    for (std::size_t k = 0; k < rest; ++k)
        for (std::size_t c = 0; c < 3; ++c)
            r[9 + c * rest + k] = float(g.sh.coeffs[k + 1](long(c)));
    float *tail = r + 9 + 3 * rest;
    tail[0] = logit(g.opacity);
    for (int i = 0; i < 3; ++i)
        tail[1 + i] = toStoredFloat(std::log(g.scale(i)));
    const Quat q = canonicalQuat(g.rotation);
    tail[4] = float(q.w());
    tail[5] = float(q.x());
    tail[6] = float(q.y());
    tail[7] = float(q.z());
}

std::string canonicalHeader(std::size_t count, int degree) {
    std::ostringstream h;
    h << "ply\nformat binary_little_endian 1.0\nelement vertex " << count << "\n";
    for (const auto &name : plyPropertyNames(degree))
        h << "property float " << name << "\n";
    h << kEndHeader;
    return h.str();
}

int cloudDegree(std::span<const SplatGaussian> splats, int fallback) {
    if (splats.empty())
        return fallback;
    const int d = splats.front().sh.degree();
    for (const auto &g : splats)
        if (g.sh.degree() != d)
            throw ValidationError("splat ply: all splats must share one SH degree");
    return d;
}

} // namespace

std::size_t plyPropertyCount(int shDegree) { return 3 + 3 + 3 + restCount(shDegree) + 1 + 3 + 4; }

std::vector<std::string> plyPropertyNames(int shDegree) {
    std::vector<std::string> names{"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"};
    for (std::size_t i = 0; i < restCount(shDegree); ++i)
        names.push_back("f_rest_" + std::to_string(i));
    names.push_back("opacity");
    for (int i = 0; i < 3; ++i)
        names.push_back("scale_" + std::to_string(i));
    for (int i = 0; i < 4; ++i)
        names.push_back("rot_" + std::to_string(i));
    return names;
}

SplatCloud decodeSplatPly(std::span<const std::uint8_t> bytes) {
    const std::string_view all(reinterpret_cast<const char *>(bytes.data()), bytes.size());
    const std::size_t end = all.find(kEndHeader);
    if (!all.starts_with("ply\n"))
        throw FormatError(Kind::MalformedHeader, "splat ply: missing 'ply' magic line", 0);
    if (end == std::string_view::npos)
        throw FormatError(Kind::MalformedHeader, "splat ply: missing end_header", bytes.size());

    SplatCloud cloud;
    cloud.header = std::string(all.substr(0, end + kEndHeader.size()));

    std::size_t offset = 0;
    std::size_t count = 0;
    bool haveFormat = false, haveElement = false;
    std::vector<std::pair<std::string, std::size_t>> properties;
    while (offset < end) {
        const std::size_t nl = all.find('\n', offset);
        const std::string_view line = all.substr(offset, nl - offset);
        std::istringstream in{std::string(line)};
        std::string word;
        in >> word;
        if (offset == 0 || word == "comment" || word == "obj_info") {
            // magic or free text
        } else if (word == "format") {
            std::string fmt, version;
            in >> fmt >> version;
            if (fmt != "binary_little_endian")
                throw FormatError(Kind::MalformedHeader, "splat ply: only binary_little_endian is supported", offset);
            haveFormat = true;
        } else if (word == "element") {
            std::string name;
            long long n = -1;
            in >> name >> n;
            if (haveElement || name != "vertex" || n < 0 || in.fail())
                throw FormatError(Kind::MalformedHeader, "splat ply: expected a single 'element vertex N'", offset);
            count = std::size_t(n);
            haveElement = true;
        } else if (word == "property") {
            std::string type, name;
            in >> type >> name;
            if (!haveElement)
                throw FormatError(Kind::MalformedHeader, "splat ply: property before element", offset);
            if (type != "float" && type != "float32")
                throw FormatError(Kind::MalformedHeader, "splat ply: property '" + name + "' is not float32", offset);
            properties.emplace_back(name, offset);
        } else {
            throw FormatError(Kind::MalformedHeader, "splat ply: unexpected header line '" + std::string(line) + "'",
                              offset);
        }
        offset = nl + 1;
    }
    if (!haveFormat || !haveElement)
        throw FormatError(Kind::MalformedHeader, "splat ply: header lacks format or vertex element", end);

    int degree = -1;
    for (int d = 0; d <= SphericalHarmonics::kMaxDegree; ++d)
        if (plyPropertyCount(d) == properties.size())
            degree = d;
    // Report the first mismatching property against the best-matching layout.
    const auto expected = plyPropertyNames(degree >= 0 ? degree : SphericalHarmonics::kMaxDegree);
    for (std::size_t i = 0; i < properties.size(); ++i)
        if (i >= expected.size() || properties[i].first != expected[i])
            throw FormatError(Kind::WrongPropertyOrder,
                              "splat ply: property " + std::to_string(i) + " is '" + properties[i].first +
                                  "', expected '" + (i < expected.size() ? expected[i] : std::string("nothing")) + "'",
                              properties[i].second);
    if (degree < 0)
        throw FormatError(Kind::WrongPropertyOrder,
                          "splat ply: " + std::to_string(properties.size()) + " properties match no SH degree", end);
    cloud.shDegree = degree;

    const std::size_t stride = plyPropertyCount(degree);
    const std::size_t payloadStart = end + kEndHeader.size();
    const std::size_t payload = bytes.size() - payloadStart;
    if (payload < count * stride * sizeof(float))
        throw FormatError(Kind::TruncatedPayload,
                          "splat ply: payload holds " + std::to_string(payload / (stride * sizeof(float))) + " of " +
                              std::to_string(count) + " records",
                          bytes.size());
    if (payload > count * stride * sizeof(float))
        throw FormatError(Kind::TruncatedPayload, "splat ply: trailing bytes after the last record",
                          payloadStart + count * stride * sizeof(float));

    cloud.stored.resize(count * stride);
    std::memcpy(cloud.stored.data(), bytes.data() + payloadStart, cloud.stored.size() * sizeof(float));
    cloud.splats.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        cloud.splats.push_back(
            decodeRecord(cloud.stored.data() + i * stride, degree, payloadStart + i * stride * sizeof(float)));
    return cloud;
}

Bytes encodeSplatPly(const SplatCloud &cloud) {
    const int degree = cloudDegree(cloud.splats, cloud.shDegree);
    const std::size_t stride = plyPropertyCount(degree);
    const bool sameLayout = degree == cloud.shDegree && !cloud.header.empty() &&
                            cloud.stored.size() == cloud.splats.size() * stride;
    const std::size_t storedCount = degree == cloud.shDegree ? cloud.stored.size() / stride : 0;

    Bytes out;
    const std::string header = sameLayout ? cloud.header : canonicalHeader(cloud.splats.size(), degree);
    out.reserve(header.size() + cloud.splats.size() * stride * sizeof(float));
    out.insert(out.end(), header.begin(), header.end());

    std::vector<float> record(stride);
    for (std::size_t i = 0; i < cloud.splats.size(); ++i) {
        const float *raw = i < storedCount ? cloud.stored.data() + i * stride : nullptr;
        if (raw && decodeRecord(raw, degree, 0) == cloud.splats[i])
            std::copy(raw, raw + stride, record.begin());
        else
            encodeRecord(cloud.splats[i], degree, record.data());
        const auto *p = reinterpret_cast<const std::uint8_t *>(record.data());
        out.insert(out.end(), p, p + stride * sizeof(float));
    }
    return out;
}

Bytes encodeSplatPly(std::span<const SplatGaussian> splats) {
    SplatCloud cloud;
    cloud.splats.assign(splats.begin(), splats.end());
    cloud.shDegree = cloudDegree(splats, 0);
    return encodeSplatPly(cloud);
}

SplatCloud loadSplats(const std::filesystem::path &path) { return decodeSplatPly(readFileBytes(path)); }

void saveSplats(const SplatCloud &cloud, const std::filesystem::path &path) {
    writeFileBytes(path, encodeSplatPly(cloud));
}

void saveSplats(std::span<const SplatGaussian> splats, const std::filesystem::path &path) {
    writeFileBytes(path, encodeSplatPly(splats));
}

Bytes readFileBytes(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("error reading '" + path.string() + "'");
    return bytes;
}

void writeFileBytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char *>(bytes.data()), std::streamsize(bytes.size()));
    if (!out)
        throw IoError("error writing '" + path.string() + "'");
}

} // namespace games
