#pragma once

#include <vector>

#include "pdra/alloc/milp.hpp"
#include "pdra/alloc/solution.hpp"
#include "pdra/lp/kernels.hpp"

namespace pdra {

struct SolveOptions {
  double time_budget_s = 10.0;  // <= 0: no wall-clock limit
  long node_limit = 0;          // 0: unlimited; set for reproducible results
  lp::kernels::Mode kernel_mode = lp::kernels::Mode::kSerial;
};

struct FlowSolution {
  bool feasible = false;
  std::vector<std::vector<double>> c;  // [edge][link]
  std::vector<std::vector<double>> b;  // [task][link]
  double flow_objective = 0.0;         // minus the coding energy rate, watts
};

// Continuous part of the program with X fixed: the cheapest flows (by coding energy) that
// satisfy conservation, bandwidth, compute and latency, or infeasible.
FlowSolution solve_flow_lp(const MilpModel& model, const std::vector<std::vector<int>>& x_fixed);

// Best-first branch and bound over X with the linear relaxation as bound. Branches by
// pseudocost, initialized by strong branching on the most fractional candidates. Placements a
// task's data cannot reach are removed before the root solve (see reachable_placements).
AllocationSolution solve_exact(const MilpModel& model, const SolveOptions& options);
AllocationSolution solve_exact(const MilpModel& model, double time_budget_s);

// Relative gap used in reports: (bound - incumbent) / max(|incumbent|, 1).
double relative_gap(double bound, double incumbent);

}  // namespace pdra
