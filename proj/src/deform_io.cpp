// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/io.hpp"

#include "games/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <numbers>
#include <set>

namespace games {

namespace {

using Kind = FormatError::Kind;

[[noreturn]] void fail(const YAML::Node &node, const std::string &what) {
    const YAML::Mark m = node.Mark();
    throw FormatError(Kind::Schema, "deform spec: " + what, std::size_t(m.line + 1), std::size_t(m.column + 1));
}

void allowKeys(const YAML::Node &map, std::initializer_list<const char *> keys) {
    if (!map.IsMap())
        fail(map, "expected a mapping");
    for (const auto &kv : map) {
        const auto key = kv.first.as<std::string>();
        bool known = false;
        for (const char *k : keys)
            known = known || key == k;
        if (!known)
            fail(kv.first, "unknown key '" + key + "'");
    }
}

double number(const YAML::Node &n, const std::string &what) {
    if (!n.IsScalar())
        fail(n, what + " must be a number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception &) {
        fail(n, what + " must be a number");
    }
}

Vec3 vec3(const YAML::Node &n, const std::string &what) {
    if (!n.IsSequence() || n.size() != 3)
        fail(n, what + " must be a list of three numbers");
    return {number(n[0], what), number(n[1], what), number(n[2], what)};
}

std::vector<std::uint32_t> indexList(const YAML::Node &n, const std::string &what) {
    if (!n.IsSequence())
        fail(n, what + " must be a list of vertex indices");
    std::vector<std::uint32_t> out;
    for (const auto &item : n) {
        const double v = number(item, what);
        if (v < 0 || v != std::floor(v) || v > 4294967295.0)
            fail(item, what + " entries must be non-negative integers");
        out.push_back(static_cast<std::uint32_t>(v));
    }
    return out;
}

VertexSelector selector(const YAML::Node &step) {
    const YAML::Node s = step["select"];
    if (!s)
        return VertexSelector::all();
    if (s.IsScalar() && s.as<std::string>() == "all")
        return VertexSelector::all();
    allowKeys(s, {"indices", "box"});
    if (s["indices"] && s["box"])
        fail(s, "select takes either indices or box, not both");
    if (s["indices"])
        return VertexSelector::of(indexList(s["indices"], "select.indices"));
    if (s["box"]) {
        const YAML::Node box = s["box"];
        allowKeys(box, {"min", "max"});
        if (!box["min"] || !box["max"])
            fail(box, "box needs min and max");
        const Vec3 lo = vec3(box["min"], "box.min");
        const Vec3 hi = vec3(box["max"], "box.max");
        if ((lo.array() > hi.array()).any())
            fail(box, "box min exceeds max");
        return VertexSelector::box(lo, hi);
    }
    fail(s, "select needs indices or box");
}

DeformStep parseStep(const YAML::Node &item) {
    if (!item.IsMap() || item.size() != 1)
        fail(item, "each step is a mapping with exactly one of rigid, scale, vertex_set, bend");
    const auto kind = item.begin()->first.as<std::string>();
    const YAML::Node body = item.begin()->second;

    if (kind == "rigid") {
        allowKeys(body, {"rotation", "axis", "degrees", "translation", "pivot", "select"});
        RigidStep r;
        if (body["rotation"] && (body["axis"] || body["degrees"]))
            fail(body, "rigid takes rotation or axis/degrees, not both");
        if (body["rotation"]) {
            const YAML::Node q = body["rotation"];
            if (!q.IsSequence() || q.size() != 4)
                fail(q, "rotation must be a quaternion [w, x, y, z]");
            r.rotation = Quat(number(q[0], "rotation"), number(q[1], "rotation"), number(q[2], "rotation"),
                              number(q[3], "rotation"));
            if (!(r.rotation.norm() > 1e-12))
                fail(q, "rotation quaternion has zero length");
            r.rotation.normalize();
        } else if (body["axis"] || body["degrees"]) {
            if (!body["axis"] || !body["degrees"])
                fail(body, "axis and degrees must be given together");
            const Vec3 axis = vec3(body["axis"], "axis");
            if (!(axis.norm() > 1e-12))
                fail(body["axis"], "axis has zero length");
            const double radians = number(body["degrees"], "degrees") * std::numbers::pi / 180.0;
            r.rotation = Quat(Eigen::AngleAxisd(radians, axis.normalized()));
        }
        if (body["translation"])
            r.translation = vec3(body["translation"], "translation");
        if (body["pivot"])
            r.pivot = vec3(body["pivot"], "pivot");
        r.select = selector(body);
        return r;
    }
    if (kind == "scale") {
        allowKeys(body, {"factors", "factor", "pivot", "select"});
        ScaleStep s;
        if (body["factors"])
            s.factors = vec3(body["factors"], "factors");
        else if (body["factor"])
            s.factors = Vec3::Constant(number(body["factor"], "factor"));
        else
            fail(body, "scale needs factors or factor");
        if ((s.factors.array() == 0.0).any())
            fail(body, "scale factors must be nonzero");
        if (body["pivot"])
            s.pivot = vec3(body["pivot"], "pivot");
        s.select = selector(body);
        return s;
    }
    if (kind == "vertex_set") {
        allowKeys(body, {"indices", "positions"});
        if (!body["indices"] || !body["positions"])
            fail(body, "vertex_set needs indices and positions");
        VertexSetStep v;
        v.indices = indexList(body["indices"], "indices");
        const YAML::Node pos = body["positions"];
        if (!pos.IsSequence())
            fail(pos, "positions must be a list of points");
        for (const auto &p : pos)
            v.positions.push_back(vec3(p, "position"));
        if (v.positions.size() != v.indices.size())
            fail(body, "indices and positions differ in length");
        return v;
    }
    if (kind == "bend") {
        allowKeys(body, {"axis", "along", "origin", "angle_per_unit", "degrees_per_unit", "select"});
        BendStep b;
        if (body["axis"])
            b.axis = vec3(body["axis"], "axis");
        if (body["along"])
            b.along = vec3(body["along"], "along");
        if (!(b.axis.norm() > 1e-12) || !(b.along.norm() > 1e-12))
            fail(body, "bend axis and along must be nonzero");
        if (body["origin"])
            b.origin = vec3(body["origin"], "origin");
        if (body["angle_per_unit"] && body["degrees_per_unit"])
            fail(body, "give angle_per_unit or degrees_per_unit, not both");
        if (body["angle_per_unit"])
            b.anglePerUnit = number(body["angle_per_unit"], "angle_per_unit");
        else if (body["degrees_per_unit"])
            b.anglePerUnit = number(body["degrees_per_unit"], "degrees_per_unit") * std::numbers::pi / 180.0;
        else
            fail(body, "bend needs angle_per_unit or degrees_per_unit");
        b.select = selector(body);
        return b;
    }
    fail(item.begin()->first, "unknown step kind '" + kind + "'");
}

DeformSpec parseSteps(const YAML::Node &steps) {
    DeformSpec spec;
    if (!steps || steps.IsNull())
        return spec;
    if (!steps.IsSequence())
        fail(steps, "steps must be a list");
    for (const auto &item : steps)
        spec.steps.push_back(parseStep(item));
    return spec;
}

YAML::Node parseDocument(std::string_view text) {
    try {
        YAML::Node doc = YAML::Load(std::string(text));
        return doc;
    } catch (const YAML::ParserException &e) {
        throw FormatError(Kind::Syntax, "deform spec: " + e.msg, std::size_t(e.mark.line + 1),
                          std::size_t(e.mark.column + 1));
    }
}

std::string textOf(const std::filesystem::path &path) {
    const Bytes bytes = readFileBytes(path);
    return {reinterpret_cast<const char *>(bytes.data()), bytes.size()};
}

} // namespace

DeformSpec parseDeformSpec(std::string_view text) {
    const YAML::Node doc = parseDocument(text);
    if (doc.IsNull())
        return {};
    allowKeys(doc, {"steps"});
    return parseSteps(doc["steps"]);
}

Keyframes parseKeyframes(std::string_view text) {
    const YAML::Node doc = parseDocument(text);
    if (doc.IsNull())
        return {{Keyframe{0.0, {}}}};
    allowKeys(doc, {"steps", "keyframes"});
    if (doc["steps"] && doc["keyframes"])
        fail(doc, "a document holds either steps or keyframes");
    if (!doc["keyframes"])
        return {{Keyframe{0.0, parseSteps(doc["steps"])}}};

    const YAML::Node list = doc["keyframes"];
    if (!list.IsSequence() || list.size() == 0)
        fail(list, "keyframes must be a non-empty list");
    Keyframes k;
    for (const auto &item : list) {
        allowKeys(item, {"time", "steps"});
        if (!item["time"])
            fail(item, "keyframe needs a time");
        Keyframe frame;
        frame.time = number(item["time"], "time");
        if (!k.frames.empty() && !(frame.time > k.frames.back().time))
            fail(item["time"], "keyframe times must be strictly increasing");
        frame.spec = parseSteps(item["steps"]);
        k.frames.push_back(std::move(frame));
    }
    return k;
}

DeformSpec loadDeformSpec(const std::filesystem::path &path) { return parseDeformSpec(textOf(path)); }

Keyframes loadKeyframes(const std::filesystem::path &path) { return parseKeyframes(textOf(path)); }

} // namespace games
