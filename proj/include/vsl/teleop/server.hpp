// WebSocket transport for the teleop service. All socket work happens on one
// internal I/O thread; broadcast() only posts to it, so the simulation loop
// never blocks on a client. Slow clients lose their oldest queued frames.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "vsl/teleop/protocol.hpp"
#include "vsl/teleop/service.hpp"

namespace vsl::teleop {

struct ServerConfig {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks an ephemeral port
  std::size_t max_clients = 8;
  std::size_t queue_capacity = 64;  // outbound messages per client
};

class TeleopServer {
 public:
  /// Returns an error message to reply with, or nullopt when accepted.
  using CommandHandler = std::function<std::optional<std::string>(const CommandMessage&)>;

  TeleopServer(ServerConfig cfg, CommandHandler handler);
  ~TeleopServer();
  TeleopServer(const TeleopServer&) = delete;
  TeleopServer& operator=(const TeleopServer&) = delete;

  /// Binds and starts the I/O thread. Throws IoError when the address cannot be bound.
  void start();
  void stop();

  unsigned short port() const;
  void broadcast(std::string message);
  std::size_t client_count() const;
  std::uint64_t dropped_messages() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Parses "host:port" (or ":port", or "port").
ServerConfig parse_bind(const std::string& bind);

/// Wall-clock paced loop: one tick per frame period / time_scale; late ticks
/// are batched (one frame per batch). `before_tick` runs on the loop thread.
/// Returns once `stop` is set.
void run_realtime(TeleopCore& core, TeleopServer& server, const std::atomic<bool>& stop,
                  const std::function<void()>& before_tick = {});

}  // namespace vsl::teleop
