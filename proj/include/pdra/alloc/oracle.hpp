#pragma once

#include <vector>

#include "pdra/alloc/solution.hpp"
#include "pdra/model/problem.hpp"

namespace pdra {

// Small dense LP used only by the oracle, independent from the revised simplex:
// maximize c.x subject to a_i.x (<=, =, >=) b_i and x >= 0.
struct DenseLp {
  enum Sense { kLe, kEq, kGe };
  int num_vars = 0;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<Sense> sense;
  std::vector<double> c;

  int add_var(double cost);
  void add_row(std::vector<double> coeffs, Sense s, double rhs);
};

struct DenseLpResult {
  bool feasible = false;
  bool unbounded = false;
  double objective = 0.0;
  std::vector<double> x;
};

// Two-phase tableau simplex with Bland's rule.
DenseLpResult solve_dense_lp(const DenseLp& lp);

inline constexpr int kOracleMaxRobots = 3;
inline constexpr int kOracleMaxTasks = 6;

// Enumerates every admissible X and, for each, the best flows over simple paths between
// producer and consumer. Throws Error above kOracleMaxRobots robots or kOracleMaxTasks tasks.
AllocationSolution brute_force_oracle(const ProblemInstance& problem, double alpha);

}  // namespace pdra
