#pragma once
// Live sessions over a websocket: hello, then state messages at a fixed tick
// rate; clients send steer and reset. Each connection runs on its own thread
// with its own simulator.

#include "guardsim/io.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace guardsim {

/// Transport-free session state machine.
class Session {
 public:
  /// The policy is forced to steer; steps is ignored.
  Session(const DeploymentPlan& plan, SimConfig config);

  json hello() const;
  /// Advances one step and returns the state message.
  json tick();
  /// Applies a client message. Returns an error message to send back, if any.
  std::optional<json> handle(std::string_view text);

  const SimState& state() const { return sim_.state(); }
  /// Steering since the last reset, replayable through run().
  const std::vector<SteerEvent>& steer_log() const { return log_; }
  /// states_digest() of every state since the last reset, the initial one
  /// included.
  std::string digest() const { return hex64(digest_); }
  int breaches() const { return breaches_; }

 private:
  void restart();
  void absorb(const SimState& s);

  const DeploymentPlan* plan_;
  Simulator sim_;
  std::vector<SteerEvent> log_;
  std::uint64_t digest_ = fnv_offset;
  int breaches_ = 0;
};

json error_message(std::string_view message);

struct ServiceOptions {
  std::string address = "127.0.0.1";
  /// 0 picks a free port.
  unsigned short port = 8080;
  double tick_hz = 20.0;
};

class Service {
 public:
  /// Binds immediately; throws Error(io, "port-in-use") when the port is taken.
  Service(DeploymentPlan plan, SimConfig config, ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  unsigned short port() const;
  /// Accepts connections until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace guardsim
