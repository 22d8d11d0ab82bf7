#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pdra/dispatch/dispatcher.hpp"
#include "pdra/model/json.hpp"
#include "pdra/model/types.hpp"
#include "pdra/net/netsim.hpp"
#include "pdra/sim/metrics.hpp"

namespace pdra::sim {

enum class Strategy { kPdra, kSelfish, kNaive };

const char* to_string(Strategy s);
// Throws Error for names other than pdra, selfish, naive.
Strategy strategy_from_string(const std::string& name);

struct RunOptions {
  double duration_s = 360.0;
  std::uint64_t seed = 1;
  Strategy strategy = Strategy::kPdra;
  double ttl_s = 0.0;            // <= 0: twice the planning period
  double timeout_s = 0.0;        // <= 0: three planning periods
  double status_period_s = 0.0;  // <= 0: a sixth of the planning period
  double dispatch_jitter_s = 2.0;
  double loss_probability = 0.0;
  long node_limit = 20000;  // solver budget; runs never depend on wall-clock time
  bool autonomy = true;     // brains dispatch their chains every period
  bool record_trace = false;
};

struct SimEvent {
  std::string kind;  // allocation_update, task_event, link_update, metrics_tick, status
  double time_s = 0.0;
  Json body;
};

// Deterministic discrete-event simulation of every robot's brain, dispatcher, world view and
// processor over the store-and-forward network. Events are totally ordered by (time, sequence).
class Simulation {
 public:
  Simulation(ScenarioSpec scenario, RunOptions options);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Processes every event with time <= t and leaves the clock at t.
  void run_until(double t);
  void run() { run_until(duration()); }
  double now() const;
  double duration() const;

  MetricsReport report() const;
  const std::vector<std::string>& trace() const;
  Json snapshot() const;

  // Supervisor inputs, effective at the current simulated time. Throw Error for unknown robots
  // or out-of-range values.
  void move_robot(const std::string& robot_id, Vec2 position);
  void set_battery(const std::string& robot_id, double battery);
  void set_event_sink(std::function<void(const SimEvent&)> sink);

  // Direct access for experiments that script dispatch or pin allocations.
  std::string submit(const std::string& robot_id, const std::string& task_id,
                     const std::vector<std::string>& chain, double ttl_s = 0.0,
                     double timeout_s = 0.0);
  // Installs a table that the robot's allocator will never replace.
  void freeze_table(const std::string& robot_id, AllocationTable table);
  const dispatch::Dispatcher& dispatcher(const std::string& robot_id) const;
  const net::Network& network() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

MetricsReport run(const ScenarioSpec& scenario, const RunOptions& options,
                  std::vector<std::string>* trace = nullptr);

// Runs PDRA, Selfish and Naive on the same scenario and seed, in that order.
std::vector<MetricsReport> compare_strategies(const ScenarioSpec& scenario, double duration_s,
                                              std::uint64_t seed, RunOptions base = {});
std::string comparison_table(const std::vector<MetricsReport>& reports);
Json comparison_json(const std::vector<MetricsReport>& reports);

}  // namespace pdra::sim
