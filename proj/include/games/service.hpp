// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "games/scene.hpp"
#include "games/session.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace games {

inline constexpr std::uint16_t kDefaultPort = 7421;

struct ServiceOptions {
    std::string host = "127.0.0.1";
    /// 0 binds an ephemeral port (see RenderService::port()).
    std::uint16_t port = kDefaultPort;
    std::size_t maxUndo = kDefaultMaxUndo;
    Vec3 background = Vec3::Zero();
};

/// TCP server for the editor protocol. Each connection gets its own session
/// seeded from the same initial scene and camera; sessions run concurrently.
class RenderService {
public:
    RenderService(Scene scene, Camera camera, ServiceOptions options);
    ~RenderService();

    RenderService(const RenderService &) = delete;
    RenderService &operator=(const RenderService &) = delete;

    /// Binds and listens; returns the bound port. Throws IoError.
    std::uint16_t listen();
    std::uint16_t port() const { return mPort; }

    /// Accept loop; returns after stop().
    void run();
    void stop();

private:
    void serveConnection(int fd, std::string sessionId);

    Scene mScene;
    Camera mCamera;
    ServiceOptions mOptions;
    int mListenFd = -1;
    std::uint16_t mPort = 0;
    std::atomic<bool> mStopping{false};
    std::atomic<std::uint64_t> mNextSession{1};

    std::mutex mConnMutex;
    std::vector<int> mConnFds;
    std::vector<std::jthread> mConnThreads;
};

} // namespace games
