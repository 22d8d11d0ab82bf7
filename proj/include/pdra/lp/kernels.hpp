#pragma once

#include <span>
#include <utility>

// Dense linear-algebra kernels used by the revised simplex. Each kernel has a serial reference
// and an OpenMP variant; the parallel variants split only independent output entries, so both
// produce bit-identical results.
namespace pdra::lp::kernels {

enum class Mode { kSerial, kParallel };

// Parallel variants fall back to the serial loop below this many multiply-adds.
inline constexpr long kParallelThreshold = 1L << 16;

struct SparseColumn {
  std::span<const int> rows;
  std::span<const double> values;
};

// Row-major dense square matrix view.
struct DenseView {
  double* data;
  int n;
  double* row(int i) const { return data + static_cast<long>(i) * n; }
};

// Gauss-Jordan pivot update of an explicit inverse: given column `alpha` = inv * a_q and pivot
// position `r`, replaces basis column r by a_q.
void pivot_update(DenseView inv, int r, std::span<const double> alpha, Mode mode);

// out[j] = sum_p weights[p] * inv(p, j)
void weighted_row_sum(DenseView inv, std::span<const double> weights, std::span<double> out,
                      Mode mode);

// out[p] = sum_k inv(p, rows[k]) * values[k]
void apply_to_sparse(DenseView inv, SparseColumn col, std::span<double> out, Mode mode);

// out[j] = cost[j] - dot(y, column j) for every column of a CSC matrix.
void reduced_costs(std::span<const int> col_start, std::span<const int> row_index,
                   std::span<const double> values, std::span<const double> cost,
                   std::span<const double> y, std::span<double> out, Mode mode);

// out[j] = dot(rho, column j) for every column of a CSC matrix.
void row_times_columns(std::span<const int> col_start, std::span<const int> row_index,
                       std::span<const double> values, std::span<const double> rho,
                       std::span<double> out, Mode mode);

}  // namespace pdra::lp::kernels
