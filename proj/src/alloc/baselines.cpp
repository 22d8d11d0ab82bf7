#include "pdra/alloc/baselines.hpp"

namespace pdra {

namespace {

int naive_executor(const ProblemInstance& p, int t, int base) {
  if (p.tasks[t].stage == SampleStage::kStore && base >= 0) return base;
  return p.tasks[t].owner;
}

}  // namespace

int base_station_index(const ProblemInstance& p) {
  for (int j = 0; j < p.num_robots(); ++j) {
    if (p.base_station[j]) return j;
  }
  return -1;
}

AllocationTable allocate_naive(const ProblemInstance& p, long previous_version) {
  AllocationTable table;
  table.version = previous_version + 1;
  const int base = base_station_index(p);
  for (int t = 0; t < p.num_tasks(); ++t) table.assignment[p.tasks[t].id] = p.robots[naive_executor(p, t, base)];
  return table;
}

ProblemInstance selfish_problem(const ProblemInstance& problem) {
  ProblemInstance p = problem;
  const int base = base_station_index(p);
  for (int t = 0; t < p.num_tasks(); ++t) {
    int j = naive_executor(problem, t, base);
    p.tasks[t].allowed = {j};
    for (int k = 0; k < p.num_robots(); ++k) {
      if (k == j) continue;
      p.load[t][k] = 0.0;
      p.power[t][k] = 0.0;
    }
  }
  p.finalize();
  return p;
}

AllocationTable allocate_selfish(const ProblemInstance& problem, double alpha,
                                 const SolveOptions& options, long previous_version) {
  ProblemInstance p = selfish_problem(problem);
  p.alpha = alpha;
  auto sol = solve_exact(build_milp(p), options);
  if (!sol.has_solution()) return allocate_naive(problem, previous_version);
  return extract_allocation_table(sol, p, previous_version);
}

}  // namespace pdra
