#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "pdra/alloc/benchmark.hpp"
#include "pdra/alloc/branch_and_bound.hpp"
#include "pdra/alloc/milp.hpp"
#include "pdra/alloc/report.hpp"
#include "pdra/model/json.hpp"
#include "pdra/model/problem.hpp"
#include "pdra/model/scenario.hpp"
#include "pdra/sim/scenarios.hpp"
#include "pdra/sim/simulation.hpp"
#include "pdra/supervise/service.hpp"

using namespace pdra;

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

// Parses "lo..hi" or a single integer.
std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--robots", "expected N or LO..HI, got '" + s + "'");
  }
}

int cmd_validate(const std::string& path, const std::string& format) {
  const ScenarioSpec spec = load_scenario(path);
  const auto violations = validate_scenario(spec);
  if (format == "json") {
    std::cout << Json{{"valid", violations.empty()}, {"violations", violations}}.dump(2) << '\n';
  } else if (violations.empty()) {
    std::cout << path << ": ok (" << spec.robots.size() << " robots, " << spec.tasks.size()
              << " tasks)\n";
  } else {
    for (const auto& v : violations) std::cout << path << ": " << v << '\n';
  }
  return violations.empty() ? 0 : 1;
}

int cmd_solve(const std::string& path, std::optional<double> alpha, double budget, long nodes,
              const std::string& format) {
  const ScenarioSpec spec = load_scenario(path);
  if (auto v = validate_scenario(spec); !v.empty()) throw Error("invalid scenario: " + v.front());
  ProblemInstance problem = make_problem(spec);
  if (alpha) problem.alpha = *alpha;
  const MilpModel model = build_milp(problem);
  SolveOptions so;
  so.time_budget_s = budget;
  so.node_limit = nodes;
  const AllocationSolution sol = solve_exact(model, so);
  const auto slack = sol.has_solution() ? slack_report(model, sol) : std::vector<RowSlack>{};
  const auto violations = sol.has_solution() ? validate_solution(sol, problem)
                                             : std::vector<std::string>{};
  if (format == "json") {
    Json out = solution_to_json(sol, problem);
    out["alpha"] = problem.alpha;
    out["violations"] = violations;
    out["slack"] = slack_to_json(model, slack);
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "status      " << to_string(sol.status) << '\n'
              << "objective   " << sol.objective << '\n'
              << "gap         " << sol.gap << '\n'
              << "solve_time  " << sol.solve_time_s << " s (" << sol.nodes << " nodes)\n";
    if (sol.has_solution()) {
      std::cout << "\n" << std::left << std::setw(24) << "task" << "executor\n";
      for (int t = 0; t < problem.num_tasks(); ++t) {
        const int j = sol.executor(t);
        std::cout << std::setw(24) << problem.tasks[t].id
                  << (j < 0 ? kSkip : problem.robots[j]) << '\n';
      }
      std::cout << "\ntight rows (slack < 1e-6)\n";
      const Json rows = slack_to_json(model, slack);
      for (const auto& r : rows) {
        if (r["slack"].is_null() || r["slack"].get<double>() >= 1e-6) continue;
        if (r["tag"] == "required_once" || r["tag"] == "conservation") continue;
        Json refs = r;
        for (const char* k : {"tag", "activity", "lower", "upper", "slack"}) refs.erase(k);
        std::cout << "  " << std::setw(22) << r["tag"].get<std::string>() << refs.dump()
                  << "  activity=" << r["activity"].get<double>() << '\n';
      }
      std::cout << "violations  " << violations.size() << '\n';
    }
  }
  return sol.has_solution() ? 0 : 1;
}

sim::RunOptions run_options(double duration, std::uint64_t seed, const std::string& allocator,
                            long nodes) {
  sim::RunOptions o;
  o.duration_s = duration;
  o.seed = seed;
  o.strategy = sim::strategy_from_string(allocator);
  o.node_limit = nodes;
  return o;
}

int cmd_run(const std::string& path, double duration, std::uint64_t seed,
            const std::string& allocator, const std::string& trace_path,
            const std::string& report_path, long nodes, const std::string& format) {
  const ScenarioSpec spec = load_scenario(path);
  std::vector<std::string> trace;
  const auto report = sim::run(spec, run_options(duration, seed, allocator, nodes),
                               trace_path.empty() ? nullptr : &trace);
  if (!trace_path.empty()) {
    std::string text;
    for (const auto& l : trace) text += l + "\n";
    write_file(trace_path, text);
  }
  const std::string json = sim::report_to_string(report);
  if (!report_path.empty()) write_file(report_path, json + "\n");
  if (format == "json") {
    std::cout << json << '\n';
  } else {
    std::cout << sim::comparison_table({report});
    std::cout << "outcomes: " << report.successes << " succeeded, " << report.failures
              << " failed, " << report.timeouts << " timed out; dispatchable transfers: "
              << report.dispatchable_transfers << '\n';
  }
  return 0;
}

int cmd_compare(const std::string& path, double duration, std::uint64_t seed, long nodes,
                const std::string& format) {
  const ScenarioSpec spec = load_scenario(path);
  sim::RunOptions base;
  base.node_limit = nodes;
  const auto reports = sim::compare_strategies(spec, duration, seed, base);
  if (format == "json") {
    std::cout << sim::comparison_json(reports).dump(2) << '\n';
  } else {
    std::cout << sim::comparison_table(reports);
  }
  return 0;
}

int cmd_bench(const std::string& robots, int seeds, double budget, const std::string& out_path) {
  auto [lo, hi] = parse_range(robots);
  if (lo < 1 || hi < lo) throw CLI::ValidationError("--robots", "empty or invalid range");
  struct Cell {
    int n;
    int seed;
    double alpha;
    std::string line;
  };
  std::vector<Cell> cells;
  for (int n = lo; n <= hi; ++n)
    for (int s = 1; s <= seeds; ++s)
      for (double a : {0.0, 0.5, 1.0}) cells.push_back({n, s, a, {}});
  // Each cell is an independent instance; the solver itself stays single-threaded.
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < cells.size(); ++i) {
    auto& c = cells[i];
    ProblemInstance p = make_problem(generate_benchmark_instance(c.seed, c.n));
    p.alpha = c.alpha;
    const auto sol = solve_exact(build_milp(p), budget);
    std::ostringstream os;
    const bool proven = sol.status == SolveStatus::kOptimal;
    os << c.n << ',' << c.seed << ',' << objective_mode(c.alpha) << ',' << std::setprecision(6)
       << (proven ? sol.solve_time_s : budget) << ',';
    if (sol.has_solution()) os << sol.gap;
    os << ',' << to_string(sol.status);
    c.line = os.str();
  }
  std::string text = "n_robots,seed,objective_mode,solve_time_s,gap_at_10s,status\n";
  for (const auto& c : cells) text += c.line + "\n";
  if (out_path.empty()) std::cout << text;
  else write_file(out_path, text);
  return 0;
}

int cmd_serve(const std::string& path, const std::string& host, int port, double factor,
              double duration, std::uint64_t seed, const std::string& allocator, long nodes) {
  const ScenarioSpec spec = load_scenario(path);
  supervise::ServiceOptions so;
  so.host = host;
  so.port = port;
  so.real_time_factor = factor;
  supervise::Service service(spec, run_options(duration, seed, allocator, nodes), so);
  const int bound = service.start();
  std::cerr << "serving " << spec.name << " on http://" << host << ':' << bound
            << " (GET /snapshot, POST /command, GET /events)\n";
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  service.stop();
  return 0;
}

int cmd_export(const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<std::string, ScenarioSpec> all[] = {
      {"ti.json", sim::build_ti_scenario()},
      {"dtn.json", sim::build_dtn_scenario(true)},
      {"dtn-no-mule.json", sim::build_dtn_scenario(false)}};
  for (const auto& [name, spec] : all) {
    const auto path = (std::filesystem::path(dir) / name).string();
    save_scenario(spec, path);
    std::cout << path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PDRA: distributed task allocation for robot teams"};
  app.require_subcommand(1);
  app.set_version_flag(
      "--version",
      std::string("pdra ") + PDRA_VERSION + "\nscenario schema " +
          std::to_string(kScenarioSchemaVersion) + "\ndispatchable schema " +
          std::to_string(kDispatchableSchemaVersion) + "\nstatus schema " +
          std::to_string(kStatusSchemaVersion) + "\nsupervision protocol schema " +
          std::to_string(supervise::kProtocolSchema));

  std::string scenario, format = "table", allocator = "pdra", trace, report, out, host = "127.0.0.1";
  std::string robots = "2..8";
  double duration = 360.0, budget = 10.0, factor = 1.0;
  std::optional<double> alpha;
  std::uint64_t seed = 1;
  long nodes = 20000;
  int seeds = 20, port = 8080;
  const auto formats = CLI::IsMember({"table", "json"});

  auto* validate = app.add_subcommand("validate", "lint a scenario file");
  validate->add_option("scenario", scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--format", format)->check(formats);

  auto* solve = app.add_subcommand("solve", "solve the allocation program of a scenario");
  solve->add_option("scenario", scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--alpha", alpha, "reward weight in [0, 1]")->check(CLI::Range(0.0, 1.0));
  solve->add_option("--time-budget-s", budget, "wall-clock budget; 0 disables")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--node-limit", nodes, "branch-and-bound node limit; 0 disables")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--format", format)->check(formats);

  auto* runc = app.add_subcommand("run", "simulate one allocator");
  runc->add_option("--scenario", scenario)->required()->check(CLI::ExistingFile);
  runc->add_option("--duration-s", duration)->check(CLI::PositiveNumber);
  runc->add_option("--seed", seed);
  runc->add_option("--allocator", allocator)->check(CLI::IsMember({"pdra", "selfish", "naive"}));
  runc->add_option("--trace", trace, "write NDJSON event trace");
  runc->add_option("--report", report, "write JSON metrics report");
  runc->add_option("--node-limit", nodes)->check(CLI::NonNegativeNumber);
  runc->add_option("--format", format)->check(formats);

  auto* compare = app.add_subcommand("compare", "PDRA vs Selfish vs Naive on one scenario");
  compare->add_option("--scenario", scenario)->required()->check(CLI::ExistingFile);
  compare->add_option("--duration-s", duration)->check(CLI::PositiveNumber);
  compare->add_option("--seed", seed);
  compare->add_option("--node-limit", nodes)->check(CLI::NonNegativeNumber);
  compare->add_option("--format", format)->check(formats);

  auto* bench = app.add_subcommand("bench", "solve-time sweep over random instances (CSV)");
  bench->add_option("--robots", robots, "N or LO..HI");
  bench->add_option("--seeds", seeds)->check(CLI::Range(1, 100000));
  bench->add_option("--time-budget-s", budget)->check(CLI::PositiveNumber);
  bench->add_option("--out", out, "CSV path (default stdout)");

  auto* serve = app.add_subcommand("serve", "run a live simulation behind the supervision API");
  serve->add_option("--scenario", scenario)->required()->check(CLI::ExistingFile);
  serve->add_option("--host", host);
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--real-time-factor", factor, "simulated seconds per wall second");
  serve->add_option("--duration-s", duration)->check(CLI::PositiveNumber);
  serve->add_option("--seed", seed);
  serve->add_option("--allocator", allocator)->check(CLI::IsMember({"pdra", "selfish", "naive"}));
  serve->add_option("--node-limit", nodes)->check(CLI::NonNegativeNumber);

  auto* exp = app.add_subcommand("export", "write the bundled scenarios as JSON");
  std::string dir = "scenarios";
  exp->add_option("--dir", dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return cmd_validate(scenario, format);
    if (*solve) return cmd_solve(scenario, alpha, budget, nodes, format);
    if (*runc) return cmd_run(scenario, duration, seed, allocator, trace, report, nodes, format);
    if (*compare) return cmd_compare(scenario, duration, seed, nodes, format);
    if (*bench) return cmd_bench(robots, seeds, budget, out);
    if (*serve) return cmd_serve(scenario, host, port, factor, duration, seed, allocator, nodes);
    if (*exp) return cmd_export(dir);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
