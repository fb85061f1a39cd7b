// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/session.hpp"

#include "games/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace games {

std::size_t maxUndoFromEnvironment() {
    const char *env = std::getenv("GAMES_MAX_UNDO");
    if (!env)
        return kDefaultMaxUndo;
    std::size_t value = 0;
    const char *end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc() || ptr != end || value == 0)
        return kDefaultMaxUndo;
    return value;
}

SceneSession::SceneSession(std::string id, Scene scene, Camera camera, std::size_t maxUndo)
    : mId(std::move(id)), mCurrent(std::make_shared<const Scene>(std::move(scene))), mMaxUndo(maxUndo),
      mCamera(camera) {
    validateCamera(mCamera);
    mVertexCount = sceneVertices(*mCurrent).size();
}

void SceneSession::setCamera(const Camera &camera) {
    validateCamera(camera);
    mCamera = camera;
}

void SceneSession::push(std::shared_ptr<const Scene> next) {
    mUndo.push_back(std::move(mCurrent));
    while (mUndo.size() > mMaxUndo)
        mUndo.pop_front();
    mCurrent = std::move(next);
    mRedo.clear();
    refreshVertexCount();
}

void SceneSession::refreshVertexCount() {
    const std::size_t count = sceneVertices(*mCurrent).size();
    if (count != mVertexCount)
        mSelection.clear(); // indices no longer refer to the same vertices
    mVertexCount = count;
}

void SceneSession::edit(const DeformSpec &spec) {
    auto next = std::make_shared<const Scene>(deformScene(*mCurrent, spec));
    push(std::move(next));
}

void SceneSession::replace(Scene scene) {
    push(std::make_shared<const Scene>(std::move(scene)));
    mSelection.clear();
}

bool SceneSession::undo() {
    if (mUndo.empty())
        return false;
    mRedo.push_back(std::move(mCurrent));
    mCurrent = std::move(mUndo.back());
    mUndo.pop_back();
    refreshVertexCount();
    return true;
}

bool SceneSession::redo() {
    if (mRedo.empty())
        return false;
    mUndo.push_back(std::move(mCurrent));
    mCurrent = std::move(mRedo.back());
    mRedo.pop_back();
    refreshVertexCount();
    return true;
}

void SceneSession::select(const VertexSelector &selector) {
    const auto vertices = sceneVertices(*mCurrent);
    std::vector<std::uint32_t> picked;
    switch (selector.kind) {
    case VertexSelector::Kind::All:
        for (std::uint32_t i = 0; i < vertices.size(); ++i)
            picked.push_back(i);
        break;
    case VertexSelector::Kind::Indices:
        for (auto i : selector.indices)
            if (i >= vertices.size())
                throw ValidationError("select: vertex index " + std::to_string(i) + " out of range");
        picked = selector.indices;
        break;
    case VertexSelector::Kind::Box:
        for (std::uint32_t i = 0; i < vertices.size(); ++i)
            if ((vertices[i].array() >= selector.boxMin.array()).all() &&
                (vertices[i].array() <= selector.boxMax.array()).all())
                picked.push_back(i);
        break;
    }
    mSelection = std::move(picked);
}

} // namespace games
