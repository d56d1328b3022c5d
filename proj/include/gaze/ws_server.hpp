#pragma once

// WebSocket transport for LiveSession: text frames, one JSON message per
// frame, one session per connection. Sessions share nothing; a session is
// dropped when its connection closes.

#include <cstdint>
#include <memory>
#include <string>
#include <thread>

#include "gaze/core.hpp"

namespace gaze {

class WsServer {
public:
    /// Binds immediately (port 0 picks a free port); throws std::runtime_error on bind failure.
    WsServer(const std::string& address, std::uint16_t port, const EngineConfig& config);
    ~WsServer();

    WsServer(const WsServer&) = delete;
    WsServer& operator=(const WsServer&) = delete;

    std::uint16_t port() const;

    /// Serves on the calling thread until stop().
    void run();
    /// Serves on a background thread.
    void start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::thread runner_;
};

}  // namespace gaze
