#include "pdra/lp/sparse_lu.hpp"

#include <cmath>

namespace pdra::lp {

bool SparseLu::factorize(int n, const std::vector<Column>& columns, double pivot_tolerance) {
  n_ = n;
  steps_.clear();
  dependent_cols_.clear();
  unpivoted_rows_.clear();

  // Active submatrix: dense values plus nonzero pattern lists (may hold stale entries).
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  auto at = [&](int r, int c) -> double& { return a[static_cast<size_t>(r) * n + c]; };
  std::vector<std::vector<int>> row_cols(n), col_rows(n);
  std::vector<char> in_pattern(static_cast<size_t>(n) * n, 0);
  for (int c = 0; c < n; ++c) {
    for (auto [r, v] : columns[c]) {
      if (v == 0.0) continue;
      if (!in_pattern[static_cast<size_t>(r) * n + c]) {
        in_pattern[static_cast<size_t>(r) * n + c] = 1;
        row_cols[r].push_back(c);
        col_rows[c].push_back(r);
      }
      at(r, c) += v;
    }
  }
  std::vector<char> row_done(n, 0), col_done(n, 0);
  std::vector<int> row_cnt(n), col_cnt(n);
  for (int i = 0; i < n; ++i) {
    row_cnt[i] = static_cast<int>(row_cols[i].size());
    col_cnt[i] = static_cast<int>(col_rows[i].size());
  }

  for (int step = 0; step < n; ++step) {
    int c = -1;
    for (int j = 0; j < n; ++j) {
      if (col_done[j]) continue;
      if (c < 0 || col_cnt[j] < col_cnt[c]) c = j;
      if (col_cnt[c] <= 1) break;
    }
    if (c < 0) break;
    double cmax = 0.0;
    for (int r : col_rows[c]) {
      if (!row_done[r]) cmax = std::max(cmax, std::abs(at(r, c)));
    }
    if (cmax <= pivot_tolerance) {
      col_done[c] = 1;
      dependent_cols_.push_back(c);
      for (int r : col_rows[c]) {
        if (!row_done[r]) --row_cnt[r];
      }
      continue;
    }
    int r = -1;
    for (int i : col_rows[c]) {
      if (row_done[i] || std::abs(at(i, c)) < 0.1 * cmax) continue;
      if (r < 0 || row_cnt[i] < row_cnt[r] ||
          (row_cnt[i] == row_cnt[r] && std::abs(at(i, c)) > std::abs(at(r, c))))
        r = i;
    }

    Step s;
    s.row = r;
    s.col = c;
    s.pivot = at(r, c);
    for (int j : row_cols[r]) {
      if (col_done[j] || j == c) continue;
      s.upper.push_back({j, at(r, j)});
    }
    row_done[r] = 1;
    col_done[c] = 1;
    for (int j : row_cols[r]) {
      if (!col_done[j]) --col_cnt[j];
    }
    for (int i : col_rows[c]) {
      if (row_done[i]) continue;
      --row_cnt[i];
      const double f = at(i, c) / s.pivot;
      at(i, c) = 0.0;
      if (f == 0.0) continue;
      s.lower.push_back({i, f});
      for (auto [j, u] : s.upper) {
        size_t idx = static_cast<size_t>(i) * n + j;
        if (!in_pattern[idx]) {
          in_pattern[idx] = 1;
          row_cols[i].push_back(j);
          col_rows[j].push_back(i);
          ++row_cnt[i];
          ++col_cnt[j];
        }
        a[idx] -= f * u;
      }
    }
    steps_.push_back(std::move(s));
  }
  for (int i = 0; i < n; ++i) {
    if (!row_done[i]) unpivoted_rows_.push_back(i);
  }
  return dependent_cols_.empty();
}

void SparseLu::inverse(std::vector<double>& out) const {
  const int n = n_;
  out.assign(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> y(n), z(n);
  for (int e = 0; e < n; ++e) {
    std::fill(y.begin(), y.end(), 0.0);
    y[e] = 1.0;
    for (const auto& s : steps_) {
      const double v = y[s.row];
      if (v == 0.0) continue;
      for (auto [i, f] : s.lower) y[i] -= f * v;
    }
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
      double v = y[it->row];
      for (auto [j, u] : it->upper) v -= u * z[j];
      z[it->col] = v / it->pivot;
    }
    for (const auto& s : steps_) out[static_cast<size_t>(s.col) * n + e] = z[s.col];
  }
}

}  // namespace pdra::lp
