#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "pdra/model/json.hpp"
#include "pdra/model/types.hpp"
#include "pdra/sim/simulation.hpp"

namespace pdra::supervise {

inline constexpr int kProtocolSchema = 1;

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;                 // 0 binds an ephemeral port
  double real_time_factor = 1.0;   // simulated seconds per wall second; <= 0 runs flat out
  std::size_t client_buffer = 4096;  // events held per stream client before oldest-first drops
  double slice_wall_s = 0.02;      // wall time between event-loop boundaries
};

// Checks shape and ranges of a command body. Returns an empty string when acceptable,
// otherwise "code: message".
std::string validate_command(const Json& command, const ScenarioSpec& spec);

// Wraps a live simulation. One thread owns the simulation; HTTP handlers only exchange
// commands and events with it through queues.
class Service {
 public:
  Service(ScenarioSpec scenario, sim::RunOptions run, ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds, starts the simulation and HTTP threads and returns the bound port. Throws Error.
  int start();
  void stop();
  // Blocks until stop() is called from another thread or a signal handler.
  void wait();

  // Same semantics as the HTTP endpoints.
  Json snapshot() const;
  // {"accepted": true, ...} or {"accepted": false, "error": {"code", "message"}}.
  Json command(const Json& body);
  bool finished() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pdra::supervise
