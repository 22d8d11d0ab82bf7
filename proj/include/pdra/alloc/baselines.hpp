#pragma once

#include "pdra/alloc/branch_and_bound.hpp"
#include "pdra/model/problem.hpp"

namespace pdra {

// Index of the first base station, or -1.
int base_station_index(const ProblemInstance& problem);

// Every task on its owner except sample storage, which goes to the base station when there
// is one.
AllocationTable allocate_naive(const ProblemInstance& problem, long previous_version = 0);

// The same problem with every task restricted to the robot the naive baseline would use.
ProblemInstance selfish_problem(const ProblemInstance& problem);

// Optimal allocation of the restricted problem, so optional tasks may be skipped. Falls back
// to the naive table when the restricted problem has no solution.
AllocationTable allocate_selfish(const ProblemInstance& problem, double alpha,
                                 const SolveOptions& options, long previous_version = 0);

}  // namespace pdra
