#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pdra/model/types.hpp"

namespace pdra::dispatch {

struct DispatcherConfig {
  double default_ttl_s = 120.0;
  double default_timeout_s = 180.0;
  size_t seen_capacity = 4096;  // result ids remembered for duplicate suppression
};

enum class RouteKind { kExecuteLocal, kSend, kFailToAcceptor, kDrop };

struct RouteAction {
  RouteKind kind = RouteKind::kDrop;
  std::string destination;  // kSend only
};

const char* to_string(RouteKind kind);

// Terminal outcome handed to the autonomy brain, exactly once per submission.
struct Outcome {
  std::string id;       // root obligation id
  std::string task_id;  // task the brain submitted
  bool success = false;
  bool timed_out = false;
  std::string producer;
  double submitted_at_s = 0.0;
  double time_s = 0.0;
};

struct OutboundMessage {
  Dispatchable dispatchable;
  std::string destination;
};

struct DispatcherCounters {
  long submitted = 0;
  long obligations_sent = 0;
  long results_sent = 0;
  long obligations_received = 0;
  long results_received = 0;
  long forwarded_on = 0;  // received obligations re-sent elsewhere
  long executed_local = 0;
  long failures_skip = 0;
  long dropped_expired = 0;
  long dropped_malformed = 0;
  long duplicates = 0;
  long late_results = 0;  // results for submissions already timed out
  long timeouts = 0;
  long chain_expansions = 0;
};

// One robot's dispatcher. Front-end, forwarder, acceptor and back-end exchange work only
// through the queues below; the owner drains them after every call.
class Dispatcher {
 public:
  Dispatcher(std::string robot_id, std::set<std::string> local_resources,
             DispatcherConfig config = {});

  const std::string& robot_id() const { return robot_id_; }
  void set_table(AllocationTable table) { table_ = std::move(table); }
  const AllocationTable& table() const { return table_; }
  bool has_resource(const std::string& task_id) const { return resources_.count(task_id) > 0; }

  // Front-end: wraps the request in an obligation carrying `chain` and hands it to the
  // forwarder. Non-positive ttl/timeout select the configured defaults. Throws Error for a task
  // outside this robot's software network.
  std::string frontend_submit(const std::string& task_id, const std::vector<std::string>& chain,
                              double now, double ttl_s = 0.0, double timeout_s = 0.0,
                              double payload_bits = 0.0);
  void set_software_network(std::set<std::string> task_ids) { own_tasks_ = std::move(task_ids); }

  // Forwarder decision for one dispatchable, consulting the current table.
  RouteAction forwarder_route(const Dispatchable& d, double now) const;

  // Acceptor entry for dispatchables from the network or, with from_network false, the back-end.
  void acceptor_ingest(Dispatchable d, double now, bool from_network = true);

  // Back-end: the executor reports completion of an obligation it took from take_backend_jobs().
  void backend_complete(const Dispatchable& obligation, bool success, double product_bits,
                        double now);

  // Synthetic failures for submissions whose timeout has elapsed.
  int expire_timeouts(double now);
  // Drops every queued dispatchable with created_at + ttl < now.
  int ttl_sweep(double now);
  // Largest overrun past TTL among queued dispatchables, 0 when none.
  double max_overdue(double now) const;
  double next_timeout() const;

  std::vector<OutboundMessage> take_outbox();
  std::vector<Dispatchable> take_backend_jobs();
  std::vector<Outcome> take_outcomes();

  size_t pending_count() const { return pending_.size(); }
  const DispatcherCounters& counters() const { return counters_; }

 private:
  struct Pending {
    std::string task_id;
    double submitted_at;
    double deadline;
  };

  void forward(Dispatchable d, double now);
  void deliver(const Dispatchable& result, double now);
  bool remember(const std::string& id);

  std::string robot_id_;
  std::set<std::string> resources_;
  std::set<std::string> own_tasks_;
  DispatcherConfig config_;
  AllocationTable table_;
  std::map<std::string, Pending> pending_;
  std::deque<OutboundMessage> outbox_;
  std::deque<Dispatchable> backend_;
  std::vector<Outcome> outcomes_;
  std::set<std::string> seen_;
  std::deque<std::string> seen_order_;
  std::uint64_t next_id_ = 1;
  DispatcherCounters counters_;
};

// Id of the obligation spawned for the next task of a chain: "r1:7" -> "r1:7/1" -> "r1:7/2".
std::string successor_id(const std::string& id);

}  // namespace pdra::dispatch
