#pragma once

// WebSocket front end for explorer sessions. Each connection gets its own
// copy of the initial scene. Plain HTTP GET requests are answered from the
// static asset directory.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "hullspace/explorer.hpp"

namespace hullspace {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 4040;  // 0 picks a free port
  std::filesystem::path static_dir;
  ControlConfig control = ControlConfig::defaults();
};

class Server {
 public:
  Server(ServerOptions opts, Scene initial);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts accepting on a background thread; returns the port.
  std::uint16_t start();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hullspace
