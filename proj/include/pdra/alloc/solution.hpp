#pragma once

#include <string>
#include <vector>

#include "pdra/model/problem.hpp"
#include "pdra/model/types.hpp"

namespace pdra {

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kTimeout };

const char* to_string(SolveStatus status);

// Values are indexed like the ProblemInstance they were solved on.
struct AllocationSolution {
  std::vector<std::vector<double>> x;  // [task][robot], 0 or 1
  std::vector<std::vector<double>> c;  // [edge][link], bits/s
  std::vector<std::vector<double>> b;  // [task][link], bits/s
  double objective = 0.0;
  SolveStatus status = SolveStatus::kInfeasible;
  double gap = 0.0;
  double solve_time_s = 0.0;
  long nodes = 0;

  bool has_solution() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kFeasible;
  }
  // Robot index executing `task`, or -1 when skipped.
  int executor(int task) const;
};

// Zero-filled value maps of the right shape.
AllocationSolution empty_solution(const ProblemInstance& problem);

inline constexpr double kValidationTolerance = 1e-6;

// Re-checks every constraint directly from the problem data. A constraint with right-hand side
// r is violated when it misses by more than kValidationTolerance * max(1, |r|).
std::vector<std::string> validate_solution(const AllocationSolution& sol,
                                           const ProblemInstance& problem);

// alpha * rewards - (1 - alpha) * (task power + coding energy rate).
double objective_value(const AllocationSolution& sol, const ProblemInstance& problem,
                       double alpha);

// Average delivery latency of t's product to child tau (edge index), in seconds.
double average_latency(const AllocationSolution& sol, const ProblemInstance& problem, int edge);

// Throws Error unless the solution is optimal or feasible. The table gets
// `previous_version + 1`.
AllocationTable extract_allocation_table(const AllocationSolution& sol,
                                         const ProblemInstance& problem,
                                         long previous_version = 0);

}  // namespace pdra
