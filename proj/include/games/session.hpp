// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "games/scene.hpp"

#include <cstddef>
#include <deque>
#include <memory>
#include <string>
#include <vector>

namespace games {

inline constexpr std::size_t kDefaultMaxUndo = 64;

/// GAMES_MAX_UNDO if set to a positive integer, else kDefaultMaxUndo.
std::size_t maxUndoFromEnvironment();

/// Editing state for one client. Scenes are immutable snapshots; an edit
/// either produces a new snapshot or leaves everything as it was.
class SceneSession {
public:
    SceneSession(std::string id, Scene scene, Camera camera, std::size_t maxUndo = kDefaultMaxUndo);

    const std::string &id() const { return mId; }
    std::shared_ptr<const Scene> snapshot() const { return mCurrent; }
    const Scene &scene() const { return *mCurrent; }

    const Camera &camera() const { return mCamera; }
    void setCamera(const Camera &camera);

    /// Applies the deformation as one transaction; on any exception the session is
    /// unchanged. Clears the redo stack.
    void edit(const DeformSpec &spec);

    /// Replaces the scene (undoable like an edit).
    void replace(Scene scene);

    bool undo();
    bool redo();
    std::size_t undoDepth() const { return mUndo.size(); }
    std::size_t redoDepth() const { return mRedo.size(); }
    std::size_t maxUndo() const { return mMaxUndo; }

    std::size_t vertexCount() const { return mVertexCount; }

    const std::vector<std::uint32_t> &selection() const { return mSelection; }
    /// Resolves the selector against the current vertices.
    void select(const VertexSelector &selector);

private:
    void push(std::shared_ptr<const Scene> next);
    void refreshVertexCount();

    std::string mId;
    std::shared_ptr<const Scene> mCurrent;
    std::deque<std::shared_ptr<const Scene>> mUndo;
    std::vector<std::shared_ptr<const Scene>> mRedo;
    std::size_t mMaxUndo;
    std::size_t mVertexCount = 0;
    Camera mCamera;
    std::vector<std::uint32_t> mSelection;
};

} // namespace games
