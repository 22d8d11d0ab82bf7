#include "pdra/lp/kernels.hpp"

#include <vector>

namespace pdra::lp::kernels {
namespace {

void pivot_update_serial(DenseView inv, int r, std::span<const double> alpha) {
  const int n = inv.n;
  double* pivot_row = inv.row(r);
  const double inv_pivot = 1.0 / alpha[r];
  for (int j = 0; j < n; ++j) pivot_row[j] *= inv_pivot;
  for (int p = 0; p < n; ++p) {
    if (p == r || alpha[p] == 0.0) continue;
    double* row = inv.row(p);
    const double f = alpha[p];
    for (int j = 0; j < n; ++j) row[j] -= f * pivot_row[j];
  }
}

void pivot_update_parallel(DenseView inv, int r, std::span<const double> alpha) {
  const int n = inv.n;
  double* pivot_row = inv.row(r);
  const double inv_pivot = 1.0 / alpha[r];
  for (int j = 0; j < n; ++j) pivot_row[j] *= inv_pivot;
#pragma omp parallel for schedule(static)
  for (int p = 0; p < n; ++p) {
    if (p == r || alpha[p] == 0.0) continue;
    double* row = inv.row(p);
    const double f = alpha[p];
    for (int j = 0; j < n; ++j) row[j] -= f * pivot_row[j];
  }
}

void weighted_row_sum_serial(DenseView inv, std::span<const double> w, std::span<double> out) {
  const int n = inv.n;
  for (int j = 0; j < n; ++j) out[j] = 0.0;
  for (int p = 0; p < n; ++p) {
    if (w[p] == 0.0) continue;
    const double* row = inv.row(p);
    const double f = w[p];
    for (int j = 0; j < n; ++j) out[j] += f * row[j];
  }
}

void weighted_row_sum_parallel(DenseView inv, std::span<const double> w, std::span<double> out) {
  const int n = inv.n;
  constexpr int kBlock = 256;
  const int blocks = (n + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (int b = 0; b < blocks; ++b) {
    const int lo = b * kBlock;
    const int hi = lo + kBlock < n ? lo + kBlock : n;
    for (int j = lo; j < hi; ++j) out[j] = 0.0;
    for (int p = 0; p < n; ++p) {
      if (w[p] == 0.0) continue;
      const double* row = inv.row(p);
      const double f = w[p];
      for (int j = lo; j < hi; ++j) out[j] += f * row[j];
    }
  }
}

}  // namespace

void pivot_update(DenseView inv, int r, std::span<const double> alpha, Mode mode) {
  if (mode == Mode::kParallel && static_cast<long>(inv.n) * inv.n >= kParallelThreshold) {
    pivot_update_parallel(inv, r, alpha);
  } else {
    pivot_update_serial(inv, r, alpha);
  }
}

void weighted_row_sum(DenseView inv, std::span<const double> weights, std::span<double> out,
                      Mode mode) {
  if (mode == Mode::kParallel && static_cast<long>(inv.n) * inv.n >= kParallelThreshold) {
    weighted_row_sum_parallel(inv, weights, out);
  } else {
    weighted_row_sum_serial(inv, weights, out);
  }
}

void apply_to_sparse(DenseView inv, SparseColumn col, std::span<double> out, Mode mode) {
  const int n = inv.n;
  const int nnz = static_cast<int>(col.rows.size());
  const bool parallel =
      mode == Mode::kParallel && static_cast<long>(n) * nnz >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (parallel)
  for (int p = 0; p < n; ++p) {
    const double* row = inv.row(p);
    double s = 0.0;
    for (int k = 0; k < nnz; ++k) s += row[col.rows[k]] * col.values[k];
    out[p] = s;
  }
}

void reduced_costs(std::span<const int> col_start, std::span<const int> row_index,
                   std::span<const double> values, std::span<const double> cost,
                   std::span<const double> y, std::span<double> out, Mode mode) {
  const int ncols = static_cast<int>(col_start.size()) - 1;
  const bool parallel =
      mode == Mode::kParallel && static_cast<long>(values.size()) >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (parallel)
  for (int j = 0; j < ncols; ++j) {
    double s = cost[j];
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) s -= y[row_index[k]] * values[k];
    out[j] = s;
  }
}

void row_times_columns(std::span<const int> col_start, std::span<const int> row_index,
                       std::span<const double> values, std::span<const double> rho,
                       std::span<double> out, Mode mode) {
  const int ncols = static_cast<int>(col_start.size()) - 1;
  const bool parallel =
      mode == Mode::kParallel && static_cast<long>(values.size()) >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (parallel)
  for (int j = 0; j < ncols; ++j) {
    double s = 0.0;
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) s += rho[row_index[k]] * values[k];
    out[j] = s;
  }
}

}  // namespace pdra::lp::kernels
