#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdra/lp/kernels.hpp"

namespace pdra::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// maximize objective . x  subject to  row_lower <= A x <= row_upper,  col_lower <= x <= col_upper
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  // Compressed sparse columns.
  std::vector<int> col_start{0};
  std::vector<int> row_index;
  std::vector<double> values;

  int num_cols() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(row_lower.size()); }

  int add_row(double lower, double upper);
  // Entries must reference existing rows; duplicates are summed.
  int add_col(double cost, double lower, double upper,
              std::vector<std::pair<int, double>> entries);
  double row_activity(int row, std::span<const double> x) const;
};

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kZero };

// Status of every structural column followed by every row's logical variable.
struct Basis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

const char* to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> row_activity;
  Basis basis;
  long iterations = 0;
};

struct SimplexOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  long max_iterations = 200000;
  int refactor_interval = 64;
  int bland_after_degenerate = 200;
  kernels::Mode kernel_mode = kernels::Mode::kSerial;
  // Wall-clock cutoff; a solve past it stops with kIterationLimit.
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

class LpSolver {
 public:
  virtual ~LpSolver() = default;
  // `col_lower`/`col_upper` replace the program's column bounds when non-empty.
  virtual LpResult solve(const LinearProgram& lp, std::span<const double> col_lower,
                         std::span<const double> col_upper, const Basis* warm) const = 0;
  LpResult solve(const LinearProgram& lp) const { return solve(lp, {}, {}, nullptr); }
};

// Bounded revised simplex over an explicit dense basis inverse. Cold starts run a composite
// primal simplex; warm starts from a dual-feasible basis run the dual simplex first.
class RevisedSimplex final : public LpSolver {
 public:
  explicit RevisedSimplex(SimplexOptions options = {}) : options_(options) {}
  using LpSolver::solve;
  LpResult solve(const LinearProgram& lp, std::span<const double> col_lower,
                 std::span<const double> col_upper, const Basis* warm) const override;
  const SimplexOptions& options() const { return options_; }

 private:
  SimplexOptions options_;
};

}  // namespace pdra::lp
