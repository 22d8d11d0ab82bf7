#include "pdra/sim/metrics.hpp"

namespace pdra::sim {

Json report_to_json(const MetricsReport& r) {
  Json robots = Json::object();
  for (const auto& [id, m] : r.robots) {
    robots[id] = {{"cpu_s", m.cpu_s},
                  {"energy_j", m.energy_j},
                  {"compute_cpu_s", m.compute_cpu_s},
                  {"compute_energy_j", m.compute_energy_j},
                  {"comm_cpu_s", m.comm_cpu_s},
                  {"comm_energy_j", m.comm_energy_j},
                  {"executions", m.executions}};
  }
  Json history = Json::object();
  for (const auto& [task, changes] : r.allocation_history) {
    Json list = Json::array();
    for (const auto& c : changes)
      list.push_back({{"t", c.time_s}, {"executor", c.executor}, {"version", c.version}});
    history[task] = list;
  }
  Json executions = Json::array();
  for (const auto& e : r.executions) {
    executions.push_back({{"id", e.dispatch_id},
                          {"task", e.task_id},
                          {"owner", e.owner},
                          {"executor", e.executor},
                          {"requester", e.requester},
                          {"start_s", e.start_s},
                          {"end_s", e.end_s},
                          {"cpu_s", e.cpu_s},
                          {"energy_j", e.energy_j},
                          {"success", e.success},
                          {"compliant", e.compliant}});
  }
  Json outcomes = Json::array();
  for (const auto& o : r.outcomes) {
    outcomes.push_back({{"id", o.id},
                        {"task", o.task_id},
                        {"owner", o.owner},
                        {"success", o.success},
                        {"timed_out", o.timed_out},
                        {"producer", o.producer},
                        {"submitted_s", o.submitted_s},
                        {"delivered_s", o.delivered_s}});
  }
  return Json{
      {"scenario", r.scenario},
      {"strategy", r.strategy},
      {"seed", r.seed},
      {"duration_s", r.duration_s},
      {"totals",
       {{"cpu_s", r.total_cpu_s},
        {"energy_j", r.total_energy_j},
        {"compute_cpu_s", r.compute_cpu_s},
        {"compute_energy_j", r.compute_energy_j},
        {"comm_cpu_s", r.comm_cpu_s},
        {"comm_energy_j", r.comm_energy_j}}},
      {"samples",
       {{"taken", r.samples_taken}, {"analyzed", r.samples_analyzed}, {"stored", r.samples_stored}}},
      {"dispatch",
       {{"submitted", r.submitted},
        {"obligations_sent", r.obligations_sent},
        {"obligations_received", r.obligations_received},
        {"results_sent", r.results_sent},
        {"results_received", r.results_received},
        {"forwarded_on", r.forwarded_on},
        {"chain_expansions", r.chain_expansions},
        {"dropped_expired", r.dropped_expired},
        {"dropped_malformed", r.dropped_malformed},
        {"duplicates", r.duplicates},
        {"late_results", r.late_results},
        {"timeouts", r.timeouts},
        {"successes", r.successes},
        {"failures", r.failures}}},
      {"network",
       {{"dispatchable_transfers", r.dispatchable_transfers},
        {"status_messages", r.status_messages},
        {"hops", r.hops},
        {"dropped_expired", r.net_dropped_expired},
        {"dropped_no_route", r.net_dropped_no_route},
        {"dropped_loss", r.net_dropped_loss},
        {"bits_delivered", r.bits_delivered}}},
      {"allocation",
       {{"resolves", r.resolves},
        {"noncompliant_executions", r.noncompliant_executions},
        {"history", history}}},
      {"ttl", {{"violations", r.ttl_violations}, {"max_overdue_s", r.max_ttl_overdue_s}}},
      {"robots", robots},
      {"executions", executions},
      {"outcomes", outcomes}};
}

std::string report_to_string(const MetricsReport& report) {
  return report_to_json(report).dump(2);
}

}  // namespace pdra::sim
