// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "pdra/alloc/benchmark.hpp"
#include "pdra/alloc/branch_and_bound.hpp"
#include "pdra/alloc/milp.hpp"
#include "pdra/alloc/oracle.hpp"
#include "pdra/alloc/solution.hpp"
#include "pdra/model/problem.hpp"
#include "pdra/sim/scenarios.hpp"
#include "pdra/sim/simulation.hpp"
#include "pdra/supervise/service.hpp"

using namespace pdra;
using namespace pdra::sim;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Solutions gathered for the validity and latency sweeps.
struct Solved {
  ProblemInstance problem;
  AllocationSolution solution;
};
std::vector<Solved> g_solved;

void keep(const ProblemInstance& p, const AllocationSolution& s) {
  if (s.has_solution()) g_solved.push_back({p, s});
}

// --- allocation ------------------------------------------------------------------------------

Verdict oracle_equivalence() {
  const auto t0 = Clock::now();
  int instances = 0, both_infeasible = 0, disagreements = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const ProblemInstance p = random_tiny_instance(seed);
    if (p.num_robots() > 3 || p.num_tasks() > 6 || p.num_links() > 4) continue;
    ++instances;
    const auto exact = solve_exact(build_milp(p), SolveOptions{0.0, 0});
    const auto oracle = brute_force_oracle(p, p.alpha);
    keep(p, exact);
    if (exact.has_solution() != oracle.has_solution()) {
      ++disagreements;
      continue;
    }
    if (!exact.has_solution()) {
      ++both_infeasible;
      continue;
    }
    const double diff = std::abs(exact.objective - oracle.objective);
    worst = std::max(worst, diff);
    if (diff > 1e-6 * std::max(1.0, std::abs(oracle.objective))) ++disagreements;
  }
  const double secs = since(t0);
  return {instances >= 100 && disagreements == 0 && secs < 60.0,
          fmt("%d instances (%d infeasible for both), %d disagreements, max |diff| %.2e, %.2f s",
              instances, both_infeasible, disagreements, worst, secs)};
}

struct SweepCell {
  int n;
  std::uint64_t seed;
  double alpha;
};

AllocationSolution solve_instance(const SweepCell& c, double budget) {
  ProblemInstance p = make_problem(generate_benchmark_instance(c.seed, c.n));
  p.alpha = c.alpha;
  auto s = solve_exact(build_milp(p), budget);
  keep(p, s);
  return s;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Verdict scaling_eight() {
  std::string detail;
  bool ok = true;
  for (double alpha : {0.0, 0.5, 1.0}) {
    std::vector<double> times;
    int unproven = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto s = solve_instance({8, seed, alpha}, 10.0);
      if (s.status != SolveStatus::kOptimal) ++unproven;
      times.push_back(s.status == SolveStatus::kOptimal ? s.solve_time_s : 1e9);
    }
    const double med = median(times);
    ok = ok && med < 10.0;
    detail += fmt("alpha %.1f median %.3f s (%d unproven); ", alpha, med, unproven);
  }
  return {ok, detail};
}

Verdict scaling_twelve() {
  int cells = 0, with_gap = 0;
  double worst_time = 0, worst_gap = 0;
  for (double alpha : {0.0, 0.5, 1.0}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      ++cells;
      const auto s = solve_instance({12, seed, alpha}, 9.5);
      worst_time = std::max(worst_time, s.solve_time_s);
      if (s.has_solution() && std::isfinite(s.gap) && s.solve_time_s <= 10.0) {
        ++with_gap;
        worst_gap = std::max(worst_gap, s.gap);
      }
    }
  }
  return {with_gap == cells, fmt("%d/%d feasible with a gap within 10 s, max gap %.4f, max time %.2f s",
                                 with_gap, cells, worst_gap, worst_time)};
}

Verdict constraint_validity() {
  // Extra sweep over every size so the check covers more than the scaling cells.
  for (int n = 2; n <= 8; ++n)
    for (std::uint64_t seed = 101; seed <= 105; ++seed)
      for (double alpha : {0.0, 0.5, 1.0}) solve_instance({n, seed, alpha}, 10.0);
  long violations = 0;
  std::string first;
  for (const auto& s : g_solved) {
    const auto v = validate_solution(s.solution, s.problem);
    violations += static_cast<long>(v.size());
    if (!v.empty() && first.empty()) first = v.front();
  }
  return {violations == 0,
          fmt("%zu solutions, %ld violations%s%s", g_solved.size(), violations,
              first.empty() ? "" : ", first: ", first.c_str())};
}

Verdict latency_bound() {
  int checked = 0, over = 0;
  double worst = -1e300;
  for (const auto& s : g_solved) {
    const auto& p = s.problem;
    for (int e = 0; e < static_cast<int>(p.edges.size()); ++e) {
      const double bound = p.edges[e].max_latency_s;
      if (!(bound < 1e29)) continue;
      if (s.solution.executor(p.edges[e].parent) < 0 || s.solution.executor(p.edges[e].child) < 0)
        continue;
      ++checked;
      const double lat = average_latency(s.solution, p, e);
      worst = std::max(worst, lat - bound);
      if (lat > bound + 1e-6) ++over;
      for (const auto& msg : validate_solution(s.solution, p))
        if (msg.rfind("latency:", 0) == 0) ++over;
    }
  }
  return {checked > 0 && over == 0,
          fmt("%d bounded edges, %d over the bound, max latency - bound %.3g s", checked, over,
              worst)};
}

// --- simulation --------------------------------------------------------------------------------

std::vector<MetricsReport> g_full_runs;

Verdict table_one() {
  const auto t0 = Clock::now();
  const auto r = compare_strategies(build_ti_scenario(), 360.0, 1);
  for (const auto& x : r) g_full_runs.push_back(x);
  const auto &pdra = r[0], &selfish = r[1], &naive = r[2];
  const double savings = 1.0 - pdra.total_energy_j / naive.total_energy_j;
  const bool energy_order = pdra.total_energy_j < selfish.total_energy_j &&
                            selfish.total_energy_j <= 1.02 * naive.total_energy_j;
  const bool cpu = pdra.total_cpu_s < naive.total_cpu_s;
  const bool stored = pdra.samples_stored >= naive.samples_stored - 1;
  return {energy_order && cpu && stored && savings >= 0.40,
          fmt("energy J pdra %.0f selfish %.0f naive %.0f; cpu s pdra %.0f naive %.0f; stored pdra "
              "%ld naive %ld; savings %.1f%%; %.1f s",
              pdra.total_energy_j, selfish.total_energy_j, naive.total_energy_j, pdra.total_cpu_s,
              naive.total_cpu_s, pdra.samples_stored, naive.samples_stored, 100 * savings,
              since(t0))};
}

bool relocatable(const ScenarioSpec& s, const std::string& task) {
  const TaskSpec* t = s.find_task(task);
  return t && t->allowed_robots.size() > 1;
}

Verdict dtn_mule() {
  const auto spec = build_dtn_scenario(true);
  RunOptions o;
  o.duration_s = 360;
  const auto r = run(spec, o);
  g_full_runs.push_back(r);
  int offloaded = 0, returned = 0, late = 0;
  double worst = 0;
  for (const auto& e : r.executions) {
    if (e.executor != "base" || sim::dtn_cluster(spec, e.owner) != "right") continue;
    if (!relocatable(spec, e.task_id)) continue;
    ++offloaded;
    const std::string root = root_dispatch_id(e.dispatch_id);
    for (const auto& out : r.outcomes) {
      if (out.id != root) continue;
      const double wait = out.delivered_s - out.submitted_s;
      worst = std::max(worst, wait);
      if (out.success && wait <= 120.0) ++returned;
      else ++late;
    }
  }
  return {offloaded > 0 && returned > 0 && late == 0,
          fmt("%d right-cluster executions on the base, %d results back, %d late, slowest %.1f s",
              offloaded, returned, late, worst)};
}

Verdict dtn_no_mule() {
  const auto spec = build_dtn_scenario(false);
  RunOptions o;
  o.duration_s = 360;
  const auto r = run(spec, o);
  g_full_runs.push_back(r);
  int cross = 0;
  for (const auto& e : r.executions)
    if (sim::dtn_cluster(spec, e.owner) != sim::dtn_cluster(spec, e.executor)) ++cross;
  std::set<std::string> completed;
  int failed = 0;
  for (const auto& out : r.outcomes) {
    if (out.success) completed.insert(out.task_id);
    else if (spec.find_task(out.task_id)->required) ++failed;
  }
  std::set<std::string> children;
  for (const auto& t : spec.tasks) children.insert(t.children.begin(), t.children.end());
  int missing = 0;
  for (const auto& t : spec.tasks) {
    if (!t.required || children.count(t.task_id)) continue;  // brains submit chain heads
    if (!completed.count(t.task_id)) ++missing;
  }
  return {cross == 0 && failed == 0 && missing == 0,
          fmt("%d cross-cluster executions, %d failed required outcomes, %d required chains never "
              "completed, %zu outcomes",
              cross, failed, missing, r.outcomes.size())};
}

ScenarioSpec pair_scenario() {
  ScenarioSpec s;
  s.name = "pair";
  s.planning_period_s = 60;
  RobotSpec a;
  a.robot_id = "a";
  a.position = {10, 10};
  a.compute_load["a/t"] = 0.2;
  a.power["a/t"] = 1.0;
  RobotSpec b = a;
  b.robot_id = "b";
  b.position = {20, 10};
  s.robots = {a, b};
  TaskSpec t;
  t.task_id = "a/t";
  t.owner_robot = "a";
  t.required = true;
  t.allowed_robots = {"a", "b"};
  s.tasks = {t};
  s.contact_plan.period_s = 60;
  s.contact_plan.windows = {{"a", "b", 0, 60, 1000, 0.05}, {"b", "a", 0, 60, 1000, 0.05}};
  return s;
}

Verdict ttl_adversarial() {
  RunOptions o;
  o.duration_s = 200;
  o.autonomy = false;
  Simulation sim(pair_scenario(), o);
  AllocationTable to_b, to_a;
  to_b.assignment = {{"a/t", "b"}};
  to_a.assignment = {{"a/t", "a"}};
  // Each robot forwards to the other: the obligation circulates until its TTL runs out.
  sim.freeze_table("a", to_b);
  sim.freeze_table("b", to_a);
  const double ttl = 30, timeout = 50;
  sim.submit("a", "a/t", {}, ttl, timeout);
  sim.run();
  const auto r = sim.report();
  const long expired = r.dropped_expired + r.net_dropped_expired;
  const bool failed = r.outcomes.size() == 1 && !r.outcomes[0].success &&
                      r.outcomes[0].delivered_s <= r.outcomes[0].submitted_s + ttl + timeout;
  return {expired >= 1 && r.executions.empty() && failed && r.ttl_violations == 0,
          fmt("%ld forwarded on, %ld expired drops, %zu executions, failure at %.1f s, "
              "ttl violations %ld",
              r.forwarded_on, expired, r.executions.size(),
              r.outcomes.empty() ? -1.0 : r.outcomes[0].delivered_s, r.ttl_violations)};
}

Verdict ttl_synthetic_failure() {
  // The executor drops off the network: no result can ever come back.
  RunOptions o;
  o.duration_s = 200;
  o.autonomy = false;
  auto spec = pair_scenario();
  spec.contact_plan.windows = {{"a", "b", 0, 60, 1000, 0.05}};
  Simulation sim(spec, o);
  AllocationTable to_b;
  to_b.assignment = {{"a/t", "b"}};
  sim.freeze_table("a", to_b);
  sim.freeze_table("b", to_b);
  const double ttl = 30, timeout = 50;
  sim.submit("a", "a/t", {}, ttl, timeout);
  sim.run();
  const auto r = sim.report();
  bool ok = r.outcomes.size() == 1;
  double at = -1;
  if (ok) {
    const auto& out = r.outcomes[0];
    at = out.delivered_s;
    ok = !out.success && out.timed_out && out.delivered_s <= out.submitted_s + ttl + timeout;
  }
  return {ok, fmt("%zu outcomes, failure delivered at %.1f s, deadline %.1f s", r.outcomes.size(),
                  at, ttl + timeout)};
}

Verdict ttl_sweep_full_runs() {
  long violations = 0;
  double overdue = 0;
  for (const auto& r : g_full_runs) {
    violations += r.ttl_violations;
    overdue = std::max(overdue, r.max_ttl_overdue_s);
  }
  return {!g_full_runs.empty() && violations == 0,
          fmt("%zu full runs, %ld processing steps left an expired dispatchable, max overdue %.3f s",
              g_full_runs.size(), violations, overdue)};
}

long chain_transfers(bool chained) {
  RunOptions o;
  o.duration_s = 300;
  o.autonomy = false;
  Simulation sim(build_ti_scenario(), o);
  AllocationTable t;
  t.assignment = {{"r02/analyze", "base"}, {"r02/store", "base"}};
  sim.freeze_table("r02", t);
  sim.freeze_table("base", t);
  const long before = sim.network().counters().dispatchables_enqueued;
  if (chained) {
    sim.submit("r02", "r02/analyze", {"r02/store"});
    sim.run();
  } else {
    sim.submit("r02", "r02/analyze", {});
    // The brain waits for the analysis before asking for storage.
    while (sim.report().outcomes.empty() && sim.now() < 150) sim.run_until(sim.now() + 1);
    sim.submit("r02", "r02/store", {});
    sim.run();
  }
  const auto r = sim.report();
  for (const auto& out : r.outcomes)
    if (!out.success) return -1;
  return sim.network().counters().dispatchables_enqueued - before;
}

Verdict chain_transfers_check() {
  const long chained = chain_transfers(true), unchained = chain_transfers(false);
  return {chained >= 0 && chained <= 3 && unchained == 4,
          fmt("chained %ld inter-robot transfers, unchained %ld", chained, unchained)};
}

Verdict determinism() {
  RunOptions o;
  o.duration_s = 360;
  o.record_trace = true;
  std::vector<std::string> t1, t2, t3;
  const auto a = run(build_ti_scenario(), o, &t1);
  const auto b = run(build_ti_scenario(), o, &t2);
  o.seed = 2;
  run(build_ti_scenario(), o, &t3);
  const bool same = report_to_string(a) == report_to_string(b) && t1 == t2;
  const bool differ = t1 != t3;
  return {same && differ && !t1.empty(),
          fmt("seed 1 twice: %s; seed 1 vs seed 2 traces: %s; %zu trace lines",
              same ? "identical" : "different", differ ? "different" : "identical", t1.size())};
}

// --- supervision -------------------------------------------------------------------------------

// TI with r03's planning cheaper onboard than on the base, so a full battery keeps it local.
ScenarioSpec ti_local_planner() {
  auto s = build_ti_scenario();
  const RobotSpec* base = s.find_robot("base");
  const double base_power = base->power.at("r03/plan");
  for (auto& r : s.robots) {
    if (r.robot_id != "r03") continue;
    r.battery = 1.0;
    r.power["r03/plan"] = 0.8 * base_power;
    r.compute_load["r03/plan"] = base->compute_load.at("r03/plan");
  }
  return s;
}

Verdict supervision_move() {
  RunOptions o;
  o.duration_s = 360;
  Simulation sim(build_ti_scenario(), o);
  std::vector<SimEvent> events;
  sim.set_event_sink([&](const SimEvent& e) { events.push_back(e); });
  sim.run_until(100);
  events.clear();
  const double t0 = sim.now();
  const double status_period = 60.0 / 6;
  sim.move_robot("r07", {2, 98});
  sim.run_until(t0 + 60);
  double link_t = -1, alloc_t = -1;
  for (const auto& e : events) {
    if (e.kind == "link_update" && link_t < 0) link_t = e.time_s;
    if (e.kind == "allocation_update" && link_t >= 0 && alloc_t < 0) alloc_t = e.time_s;
  }
  const bool ok = link_t >= 0 && alloc_t >= link_t && link_t - t0 <= 1e-9 &&
                  alloc_t - t0 <= status_period + 1e-9;
  return {ok, fmt("command at %.1f s, first link_update at %.1f s, allocation_update at %.1f s",
                  t0, link_t, alloc_t)};
}

Verdict supervision_battery() {
  RunOptions o;
  o.duration_s = 360;
  Simulation sim(ti_local_planner(), o);
  std::vector<SimEvent> events;
  sim.set_event_sink([&](const SimEvent& e) { events.push_back(e); });
  sim.run_until(100);
  const std::string before = sim.snapshot()["allocation"].value("r03/plan", "");
  events.clear();
  const double t0 = sim.now();
  sim.set_battery("r03", 0.2);
  sim.run_until(t0 + 60);
  double moved_at = -1;
  std::string after;
  for (const auto& e : events) {
    if (e.kind != "allocation_update" || e.body["robot"] != "r03") continue;
    after = e.body["assignment"].value("r03/plan", "");
    if (after != "r03" && moved_at < 0) moved_at = e.time_s;
  }
  const bool ok = before == "r03" && moved_at >= 0 && after == "base" && moved_at - t0 <= 10.0;
  return {ok, fmt("r03/plan on %s before, on %s after, update %.1f s after the command",
                  before.c_str(), after.c_str(), moved_at < 0 ? -1.0 : moved_at - t0)};
}

Verdict supervision_pause() {
  supervise::ServiceOptions so;
  so.port = 0;
  so.real_time_factor = 20.0;
  RunOptions o;
  o.duration_s = 360;
  supervise::Service svc(build_ti_scenario(), o, so);
  svc.start();
  std::this_thread::sleep_for(std::chrono::milliseconds(150));
  const Json ack = svc.command({{"kind", "pause"}});
  std::this_thread::sleep_for(std::chrono::milliseconds(60));
  const Json a = svc.snapshot();
  std::this_thread::sleep_for(std::chrono::milliseconds(300));
  const Json b = svc.snapshot();
  svc.command({{"kind", "resume"}});
  std::this_thread::sleep_for(std::chrono::milliseconds(200));
  const Json c = svc.snapshot();
  svc.stop();
  const bool ok = ack.value("accepted", false) && a.dump() == b.dump() &&
                  c["time_s"].get<double>() > b["time_s"].get<double>();
  return {ok, fmt("paused at %.2f s, snapshots %s, resumed to %.2f s", a["time_s"].get<double>(),
                  a.dump() == b.dump() ? "identical" : "different", c["time_s"].get<double>())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> check;
  };
  // Order matters: later sweeps reuse solutions and reports gathered by earlier ones.
  const std::vector<Criterion> criteria{
      {"oracle_equivalence", oracle_equivalence},
      {"scaling_8_robots_proven_optimal", scaling_eight},
      {"scaling_12_robots_feasible_with_gap", scaling_twelve},
      {"constraint_validity", constraint_validity},
      {"average_latency_within_bound", latency_bound},
      {"ti_comparison_table", table_one},
      {"dtn_mule_offload_returns", dtn_mule},
      {"dtn_no_mule_stays_in_cluster", dtn_no_mule},
      {"ttl_adversarial_tables", ttl_adversarial},
      {"ttl_synthetic_failure", ttl_synthetic_failure},
      {"ttl_no_survivor_in_full_runs", ttl_sweep_full_runs},
      {"chain_transfers", chain_transfers_check},
      {"determinism", determinism},
      {"supervision_move_out_of_range", supervision_move},
      {"supervision_low_battery", supervision_battery},
      {"supervision_pause", supervision_pause},
  };
  int failed = 0;
  const auto t0 = Clock::now();
  for (const auto& c : criteria) {
    Verdict v;
    const auto started = Clock::now();
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(),
                since(started));
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed, %.1f s\n", criteria.size(), failed, since(t0));
  return failed == 0 ? 0 : 1;
}
