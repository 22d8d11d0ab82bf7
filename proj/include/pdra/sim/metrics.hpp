#pragma once

#include <map>
#include <string>
#include <vector>

#include "pdra/model/json.hpp"

namespace pdra::sim {

struct RobotMetrics {
  double cpu_s = 0.0;
  double energy_j = 0.0;
  double compute_cpu_s = 0.0;
  double compute_energy_j = 0.0;
  double comm_cpu_s = 0.0;
  double comm_energy_j = 0.0;
  long executions = 0;
};

struct ExecutionRecord {
  std::string dispatch_id;
  std::string task_id;
  std::string owner;
  std::string executor;
  std::string requester;
  double start_s = 0.0;
  double end_s = 0.0;
  double cpu_s = 0.0;
  double energy_j = 0.0;
  bool success = false;
  bool compliant = true;  // the executor's own table pointed at itself (or did not know the task)
};

struct OutcomeRecord {
  std::string id;
  std::string task_id;
  std::string owner;
  bool success = false;
  bool timed_out = false;
  std::string producer;
  double submitted_s = 0.0;
  double delivered_s = 0.0;
};

struct AllocationChange {
  double time_s = 0.0;
  std::string executor;  // in the owner's table
  long version = 0;
};

struct MetricsReport {
  std::string scenario;
  std::string strategy;
  unsigned long long seed = 0;
  double duration_s = 0.0;

  std::map<std::string, RobotMetrics> robots;
  double total_cpu_s = 0.0;
  double total_energy_j = 0.0;
  double compute_cpu_s = 0.0;
  double compute_energy_j = 0.0;
  double comm_cpu_s = 0.0;
  double comm_energy_j = 0.0;

  long samples_taken = 0;
  long samples_analyzed = 0;
  long samples_stored = 0;

  long submitted = 0;
  long obligations_sent = 0;
  long obligations_received = 0;
  long results_sent = 0;
  long results_received = 0;
  long forwarded_on = 0;
  long chain_expansions = 0;
  long dropped_expired = 0;
  long dropped_malformed = 0;
  long duplicates = 0;
  long late_results = 0;
  long timeouts = 0;
  long successes = 0;
  long failures = 0;

  long dispatchable_transfers = 0;  // dispatchables handed to the network between robots
  long status_messages = 0;
  long hops = 0;
  long net_dropped_expired = 0;
  long net_dropped_no_route = 0;
  long net_dropped_loss = 0;
  double bits_delivered = 0.0;

  long resolves = 0;
  long noncompliant_executions = 0;
  long ttl_violations = 0;  // processing steps that left an expired dispatchable queued
  double max_ttl_overdue_s = 0.0;

  std::map<std::string, std::vector<AllocationChange>> allocation_history;
  std::vector<ExecutionRecord> executions;
  std::vector<OutcomeRecord> outcomes;
};

Json report_to_json(const MetricsReport& report);
// Canonical serialization; byte-identical for identical runs.
std::string report_to_string(const MetricsReport& report);

}  // namespace pdra::sim
