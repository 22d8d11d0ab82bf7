#pragma once

#include <utility>
#include <vector>

namespace pdra::lp {

// LU factorization of a square sparse matrix with Markowitz pivot selection (minimum column
// count, then minimum row count among entries within a threshold of the column maximum).
// Used to rebuild the explicit basis inverse cheaply.
class SparseLu {
 public:
  using Column = std::vector<std::pair<int, double>>;  // (row, value)

  // Returns false when some columns had no acceptable pivot; see dependent_columns().
  bool factorize(int n, const std::vector<Column>& columns, double pivot_tolerance = 1e-11);

  const std::vector<int>& dependent_columns() const { return dependent_cols_; }
  const std::vector<int>& unpivoted_rows() const { return unpivoted_rows_; }

  // Dense inverse in row-major order: out[c * n + r] = inverse(c, r), i.e. rows of the inverse
  // follow matrix columns and its columns follow matrix rows.
  void inverse(std::vector<double>& out) const;

 private:
  struct Step {
    int row = -1;
    int col = -1;
    double pivot = 0.0;
    std::vector<std::pair<int, double>> lower;  // (row i, multiplier): row_i -= m * row_pivot
    std::vector<std::pair<int, double>> upper;  // (col j, value) of the pivot row, j != col
  };
  int n_ = 0;
  std::vector<Step> steps_;
  std::vector<int> dependent_cols_, unpivoted_rows_;
};

}  // namespace pdra::lp
