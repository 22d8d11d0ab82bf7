#include <gtest/gtest.h>

#include <random>

#include "pdra/lp/linear_program.hpp"

using namespace pdra::lp;

namespace {

// max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
LinearProgram small_lp() {
  LinearProgram lp;
  lp.add_row(-kInf, 4);
  lp.add_row(-kInf, 6);
  lp.add_col(3, 0, 3, {{0, 1}, {1, 1}});
  lp.add_col(2, 0, kInf, {{0, 1}, {1, 3}});
  return lp;
}

}  // namespace

TEST(Simplex, SmallOptimum) {
  auto r = RevisedSimplex().solve(small_lp());
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 11.0, 1e-9);
  EXPECT_NEAR(r.x[0], 3.0, 1e-9);
  EXPECT_NEAR(r.x[1], 1.0, 1e-9);
}

TEST(Simplex, Infeasible) {
  LinearProgram lp;
  lp.add_row(5, kInf);
  lp.add_col(1, 0, 2, {{0, 1}});
  EXPECT_EQ(RevisedSimplex().solve(lp).status, LpStatus::kInfeasible);
}

TEST(Simplex, Unbounded) {
  LinearProgram lp;
  lp.add_row(-kInf, 1);
  lp.add_col(1, 0, kInf, {{0, 1}});
  lp.add_col(1, 0, kInf, {{0, -1}});
  EXPECT_EQ(RevisedSimplex().solve(lp).status, LpStatus::kUnbounded);
}

TEST(Simplex, EqualityAndFreeColumns) {
  // max -x - y  s.t. x - y = 2, x + y >= 0 with x, y free -> x = 1, y = -1
  LinearProgram lp;
  lp.add_row(2, 2);
  lp.add_row(0, kInf);
  lp.add_col(-1, -kInf, kInf, {{0, 1}, {1, 1}});
  lp.add_col(-1, -kInf, kInf, {{0, -1}, {1, 1}});
  auto r = RevisedSimplex().solve(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 0.0, 1e-9);
  EXPECT_NEAR(r.x[0] - r.x[1], 2.0, 1e-9);
}

TEST(Simplex, WarmStartAfterBoundChangeMatchesColdStart) {
  auto lp = small_lp();
  RevisedSimplex solver;
  auto root = solver.solve(lp);
  std::vector<double> lo = lp.col_lower, hi = lp.col_upper;
  hi[0] = 1.5;
  auto warm = solver.solve(lp, lo, hi, &root.basis);
  auto cold = solver.solve(lp, lo, hi, nullptr);
  ASSERT_EQ(warm.status, LpStatus::kOptimal);
  EXPECT_NEAR(warm.objective, cold.objective, 1e-9);
  EXPECT_NEAR(warm.objective, 3 * 1.5 + 2 * 1.5, 1e-9);
}

// Random LPs: box-bounded so always bounded; compare against the duality-free check that the
// warm and cold solves agree and the reported point is feasible.
TEST(Simplex, RandomBoxedProgramsAreFeasibleAndConsistent) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  RevisedSimplex solver;
  for (int trial = 0; trial < 200; ++trial) {
    LinearProgram lp;
    int m = 3 + trial % 7, n = 4 + trial % 11;
    for (int i = 0; i < m; ++i) lp.add_row(-kInf, 1 + std::abs(u(rng)) * 5);
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<int, double>> e;
      for (int i = 0; i < m; ++i)
        if (u(rng) > 0) e.push_back({i, u(rng) * 3});
      lp.add_col(u(rng), 0, 2 + trial % 3, e);
    }
    auto r = solver.solve(lp);
    ASSERT_EQ(r.status, LpStatus::kOptimal) << trial;
    for (int i = 0; i < m; ++i) EXPECT_LE(r.row_activity[i], lp.row_upper[i] + 1e-7);
    for (int j = 0; j < n; ++j) {
      EXPECT_GE(r.x[j], -1e-9);
      EXPECT_LE(r.x[j], lp.col_upper[j] + 1e-9);
    }
    std::vector<double> lo = lp.col_lower, hi = lp.col_upper;
    hi[trial % n] = 0.5;
    auto warm = solver.solve(lp, lo, hi, &r.basis);
    auto cold = solver.solve(lp, lo, hi, nullptr);
    ASSERT_EQ(warm.status, LpStatus::kOptimal) << trial;
    EXPECT_NEAR(warm.objective, cold.objective, 1e-7) << trial;
  }
}
