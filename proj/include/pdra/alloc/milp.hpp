#pragma once

#include <string>
#include <vector>

#include "pdra/alloc/solution.hpp"
#include "pdra/lp/linear_program.hpp"
#include "pdra/model/problem.hpp"

namespace pdra {

// Constraint families of the allocation program.
enum class RowTag {
  kRequiredOnce,   // sum_j X(j,t) = 1, required t
  kOptionalAtMostOnce,
  kConservation,   // data of t for child tau is created at t's robot and consumed at tau's
  kMultiplex,      // B(i,j,t) >= C(i,j,t,tau)
  kCompute,        // per-robot core budget including coding load
  kBandwidth,      // per-link sum_t B <= throughput
  kLatency,        // average delivery latency per (t, tau)
};

const char* to_string(RowTag tag);

struct RowInfo {
  RowTag tag;
  int a = -1;  // task, robot, link or edge index depending on the tag
  int b = -1;
};

// Linear relaxation of the allocation program (X relaxed to [0, 1]) plus the index maps from
// model variables to LP columns.
//
// B(i,j,t) of a childless task is identically 0, and for a task with exactly one child it is
// the same column as that child's C flow; both substitutions preserve the optimum because B
// only appears with non-positive objective weight and in upper-bounded rows. Only tasks with
// several children keep separate B columns and multiplex rows.
struct MilpModel {
  ProblemInstance problem;
  lp::LinearProgram lp;
  std::vector<RowInfo> rows;
  std::vector<std::vector<int>> x_col;  // [task][robot]; columns of disallowed pairs are fixed at 0
  std::vector<std::vector<int>> c_col;  // [edge][link]
  std::vector<std::vector<int>> b_col;  // [task][link]; -1 when B is identically 0

  // Variable counts of the unreduced model.
  int num_x() const { return problem.num_robots() * problem.num_tasks(); }
  int num_c() const { return problem.num_links() * static_cast<int>(problem.edges.size()); }
  int num_b() const { return problem.num_links() * problem.num_tasks(); }
  int count_rows(RowTag tag) const;
};

// allowed_mask narrowed by reachability: a child task can only run where some placement of its
// parent can send it data, and a required child's parent only where it can feed some placement
// of the child. Infeasible placements only; the optimum is unchanged.
std::vector<std::vector<bool>> reachable_placements(const ProblemInstance& problem);

// Throws Error for an empty robot set or a non-positive period.
MilpModel build_milp(const ProblemInstance& problem);

// Objective weight of X(j,t) and of one bit/s of B on link l.
double x_objective(const ProblemInstance& problem, int task, int robot);
double b_objective(const ProblemInstance& problem, int link);

struct RowSlack {
  RowInfo row;
  double activity = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double slack = 0.0;  // distance to the nearer finite bound; negative when violated
};

// Evaluates every row of the model at the solution's X, C and B values.
std::vector<RowSlack> slack_report(const MilpModel& model, const AllocationSolution& sol);

}  // namespace pdra
