// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/service.hpp"

#include "games/errors.hpp"
#include "games/protocol.hpp"
#include "games/session.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>

namespace games {

RenderService::RenderService(Scene scene, Camera camera, ServiceOptions options)
    : mScene(std::move(scene)), mCamera(camera), mOptions(std::move(options)) {
    validateCamera(mCamera);
}

RenderService::~RenderService() {
    stop();
    std::vector<std::jthread> threads;
    {
        std::lock_guard lock(mConnMutex);
        threads = std::move(mConnThreads);
    }
    threads.clear(); // joins
}

std::uint16_t RenderService::listen() {
    mListenFd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (mListenFd < 0)
        throw IoError(std::string("socket: ") + std::strerror(errno));
    const int yes = 1;
    ::setsockopt(mListenFd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(mOptions.port);
    if (::inet_pton(AF_INET, mOptions.host.c_str(), &addr.sin_addr) != 1)
        throw IoError("invalid listen address '" + mOptions.host + "'");
    if (::bind(mListenFd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) < 0)
        throw IoError("bind " + mOptions.host + ":" + std::to_string(mOptions.port) + ": " + std::strerror(errno));
    if (::listen(mListenFd, 16) < 0)
        throw IoError(std::string("listen: ") + std::strerror(errno));

    socklen_t len = sizeof(addr);
    ::getsockname(mListenFd, reinterpret_cast<sockaddr *>(&addr), &len);
    mPort = ntohs(addr.sin_port);
    return mPort;
}

void RenderService::run() {
    if (mListenFd < 0)
        listen();
    while (!mStopping) {
        const int fd = ::accept(mListenFd, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR)
                continue;
            break; // listening socket shut down
        }
        const int yes = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof(yes));
        std::lock_guard lock(mConnMutex);
        if (mStopping) {
            ::close(fd);
            break;
        }
        mConnFds.push_back(fd);
        const std::string id = "s" + std::to_string(mNextSession++);
        mConnThreads.emplace_back([this, fd, id] { serveConnection(fd, id); });
    }
}

void RenderService::stop() {
    if (mStopping.exchange(true))
        return;
    if (mListenFd >= 0) {
        ::shutdown(mListenFd, SHUT_RDWR);
        ::close(mListenFd);
    }
    std::lock_guard lock(mConnMutex);
    for (int fd : mConnFds)
        ::shutdown(fd, SHUT_RDWR);
}

void RenderService::serveConnection(int fd, std::string sessionId) {
    std::mutex writeMutex;
    auto send = [&](const std::vector<std::uint8_t> &bytes) {
        std::lock_guard lock(writeMutex);
        protocol::writeBytes(fd, bytes);
    };

    try {
        SceneSession session(sessionId, mScene, mCamera, mOptions.maxUndo);

        // Renders run on a worker over captured snapshots, one at a time;
        // edits keep flowing into the session meanwhile.
        std::mutex queueMutex;
        std::condition_variable queueCv;
        std::deque<protocol::ControlResult> queue;
        bool closing = false;
        std::jthread worker([&] {
            for (;;) {
                protocol::ControlResult job;
                {
                    std::unique_lock lock(queueMutex);
                    queueCv.wait(lock, [&] { return closing || !queue.empty(); });
                    if (queue.empty())
                        return;
                    job = std::move(queue.front());
                    queue.pop_front();
                }
                try {
                    send(protocol::renderFrame(*job.snapshot, job.camera, job.background));
                } catch (const IoError &) {
                    return;
                } catch (const Error &e) {
                    try {
                        send(protocol::encodeJsonFrame(
                            {{"type", "error"}, {"request", "render"}, {"code", "error"}, {"message", e.what()}}));
                    } catch (const IoError &) {
                        return;
                    }
                }
            }
        });

        send(protocol::encodeJsonFrame(protocol::helloMessage(session)));
        for (;;) {
            std::optional<std::vector<std::uint8_t>> payload;
            try {
                payload = protocol::readPayload(fd);
            } catch (const FormatError &e) {
                send(protocol::encodeJsonFrame(
                    {{"type", "error"}, {"request", "?"}, {"code", "protocol"}, {"message", e.what()}}));
                break; // framing is lost; drop the connection
            }
            if (!payload)
                break;
            protocol::Frame frame;
            try {
                frame = protocol::decodePayload(*payload);
            } catch (const FormatError &e) {
                send(protocol::encodeJsonFrame(
                    {{"type", "error"}, {"request", "?"}, {"code", "protocol"}, {"message", e.what()}}));
                continue;
            }
            if (frame.kind != protocol::FrameKind::Json) {
                send(protocol::encodeJsonFrame({{"type", "error"},
                                                {"request", "?"},
                                                {"code", "protocol"},
                                                {"message", "clients send JSON frames only"}}));
                continue;
            }
            protocol::ControlResult result = protocol::handleControl(session, frame.json, mOptions.background);
            if (result.render) {
                std::lock_guard lock(queueMutex);
                queue.push_back(std::move(result));
                queueCv.notify_one();
            } else {
                send(protocol::encodeJsonFrame(result.reply));
            }
        }
        {
            std::lock_guard lock(queueMutex);
            closing = true;
        }
        queueCv.notify_one();
    } catch (const Error &) {
        // Peer vanished or the session could not start; just drop the connection.
    }

    std::lock_guard lock(mConnMutex);
    mConnFds.erase(std::remove(mConnFds.begin(), mConnFds.end(), fd), mConnFds.end());
    ::close(fd);
}

} // namespace games
