#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "pdra/lp/linear_program.hpp"
#include "pdra/lp/sparse_lu.hpp"

namespace pdra::lp {

int LinearProgram::add_row(double lower, double upper) {
  row_lower.push_back(lower);
  row_upper.push_back(upper);
  return num_rows() - 1;
}

int LinearProgram::add_col(double cost, double lower, double upper,
                           std::vector<std::pair<int, double>> entries) {
  std::sort(entries.begin(), entries.end());
  int last = -1;
  for (const auto& [row, value] : entries) {
    if (row == last) {
      values.back() += value;
      continue;
    }
    row_index.push_back(row);
    values.push_back(value);
    last = row;
  }
  objective.push_back(cost);
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  col_start.push_back(static_cast<int>(row_index.size()));
  return num_cols() - 1;
}

double LinearProgram::row_activity(int row, std::span<const double> x) const {
  double s = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) {
      if (row_index[k] == row) s += values[k] * x[j];
    }
  }
  return s;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

double pow2_round(double s) {
  if (!(s > 0) || !std::isfinite(s)) return 1.0;
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(s))));
}

class Engine {
 public:
  Engine(const LinearProgram& lp, std::span<const double> col_lower,
         std::span<const double> col_upper, const SimplexOptions& opt)
      : opt_(opt), n_(lp.num_cols()), m_(lp.num_rows()), total_(n_ + m_) {
    col_start_ = lp.col_start;
    row_index_ = lp.row_index;
    values_ = lp.values;
    scale(lp);
    lower_.resize(total_);
    upper_.resize(total_);
    cost_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
      double lo = col_lower.empty() ? lp.col_lower[j] : col_lower[j];
      double hi = col_upper.empty() ? lp.col_upper[j] : col_upper[j];
      lower_[j] = lo / col_scale_[j];
      upper_[j] = hi / col_scale_[j];
      cost_[j] = lp.objective[j] * col_scale_[j];
    }
    double cmax = 0.0;
    for (int j = 0; j < n_; ++j) cmax = std::max(cmax, std::abs(cost_[j]));
    obj_scale_ = cmax > 0 ? 1.0 / cmax : 1.0;
    for (int j = 0; j < n_; ++j) cost_[j] *= obj_scale_;
    for (int i = 0; i < m_; ++i) {
      lower_[n_ + i] = lp.row_lower[i] * row_scale_[i];
      upper_[n_ + i] = lp.row_upper[i] * row_scale_[i];
    }
    x_.assign(total_, 0.0);
    status_.assign(total_, VarStatus::kAtLower);
    pos_.assign(total_, -1);
    head_.assign(m_, -1);
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    y_.assign(m_, 0.0);
    d_.assign(total_, 0.0);
    alpha_.assign(m_, 0.0);
    cb_.assign(m_, 0.0);
    row_alpha_.assign(n_, 0.0);
    rho_.assign(m_, 0.0);
  }

  LpResult run(const Basis* warm) {
    LpResult result;
    if (!bounds_consistent()) {
      result.status = LpStatus::kInfeasible;
      return finish(result);
    }
    bool warm_ok = warm && static_cast<int>(warm->status.size()) == total_ && load_basis(*warm);
    if (!warm_ok) slack_basis();
    if (!refactor()) {
      slack_basis();
      if (!refactor()) {
        result.status = LpStatus::kNumericalFailure;
        return finish(result);
      }
    }
    compute_primal();

    LpStatus status;
    bool use_dual = warm_ok && max_infeasibility() > opt_.primal_tolerance && dual_feasible();
    if (use_dual) {
      status = dual_simplex();
      if (status == LpStatus::kInfeasible || status == LpStatus::kOptimal) status = primal_simplex();
    } else {
      status = primal_simplex();
    }
    result.status = status;
    return finish(result);
  }

 private:
  // --- setup -------------------------------------------------------------------------------
  void scale(const LinearProgram& lp) {
    col_scale_.assign(n_, 1.0);
    row_scale_.assign(m_, 1.0);
    for (int pass = 0; pass < 4; ++pass) {
      std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
      for (int j = 0; j < n_; ++j) {
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          double a = std::abs(lp.values[k]) * col_scale_[j];
          if (a == 0) continue;
          int i = row_index_[k];
          rmin[i] = std::min(rmin[i], a);
          rmax[i] = std::max(rmax[i], a);
        }
      }
      for (int i = 0; i < m_; ++i) {
        if (rmax[i] > 0) row_scale_[i] = pow2_round(1.0 / std::sqrt(rmin[i] * rmax[i]));
      }
      for (int j = 0; j < n_; ++j) {
        double cmin = kInf, cmax = 0.0;
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          double a = std::abs(lp.values[k]) * row_scale_[row_index_[k]];
          if (a == 0) continue;
          cmin = std::min(cmin, a);
          cmax = std::max(cmax, a);
        }
        if (cmax > 0) col_scale_[j] = pow2_round(1.0 / std::sqrt(cmin * cmax));
      }
    }
    for (int j = 0; j < n_; ++j) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
        values_[k] = lp.values[k] * row_scale_[row_index_[k]] * col_scale_[j];
    }
  }

  bool bounds_consistent() const {
    for (int j = 0; j < total_; ++j) {
      if (lower_[j] > upper_[j] + opt_.primal_tolerance) return false;
    }
    return true;
  }

  VarStatus default_nonbasic(int j) const {
    if (std::isfinite(lower_[j])) return VarStatus::kAtLower;
    if (std::isfinite(upper_[j])) return VarStatus::kAtUpper;
    return VarStatus::kZero;
  }

  void set_nonbasic(int j, VarStatus s) {
    if (s == VarStatus::kAtLower && !std::isfinite(lower_[j])) s = default_nonbasic(j);
    if (s == VarStatus::kAtUpper && !std::isfinite(upper_[j])) s = default_nonbasic(j);
    if (s == VarStatus::kZero && (std::isfinite(lower_[j]) || std::isfinite(upper_[j])))
      s = default_nonbasic(j);
    status_[j] = s;
    pos_[j] = -1;
    x_[j] = s == VarStatus::kAtLower ? lower_[j] : s == VarStatus::kAtUpper ? upper_[j] : 0.0;
  }

  void slack_basis() {
    for (int j = 0; j < n_; ++j) set_nonbasic(j, default_nonbasic(j));
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      pos_[n_ + i] = i;
      status_[n_ + i] = VarStatus::kBasic;
    }
  }

  bool load_basis(const Basis& basis) {
    int basic = 0;
    for (auto s : basis.status) basic += s == VarStatus::kBasic;
    if (basic != m_) return false;
    int p = 0;
    for (int j = 0; j < total_; ++j) {
      if (basis.status[j] == VarStatus::kBasic) {
        status_[j] = VarStatus::kBasic;
        head_[p] = j;
        pos_[j] = p++;
      } else {
        set_nonbasic(j, basis.status[j]);
      }
    }
    return true;
  }

  // --- linear algebra -----------------------------------------------------------------------
  kernels::DenseView inv() { return {binv_.data(), m_}; }

  // Rebuilds the explicit inverse from the basis heads. Logical columns are eliminated
  // directly; only the structural kernel goes through the sparse LU. Dependent structural
  // columns are swapped for logicals of uncovered rows.
  bool refactor() {
    since_refactor_ = 0;
    duals_valid_ = false;
    for (int attempt = 0; attempt < 4; ++attempt) {
      std::vector<int> row_pos(m_, -1);
      std::vector<char> covered(m_, 0);
      std::vector<int> kernel_cols;  // basis positions holding structurals
      for (int p = 0; p < m_; ++p) {
        if (head_[p] >= n_) covered[head_[p] - n_] = 1;
        else kernel_cols.push_back(p);
      }
      std::vector<int> rows;
      for (int i = 0; i < m_; ++i) {
        if (!covered[i]) {
          row_pos[i] = static_cast<int>(rows.size());
          rows.push_back(i);
        }
      }
      const int k = static_cast<int>(kernel_cols.size());
      if (static_cast<int>(rows.size()) != k) return false;

      std::vector<SparseLu::Column> cols(k);
      for (int a = 0; a < k; ++a) {
        int j = head_[kernel_cols[a]];
        for (int q = col_start_[j]; q < col_start_[j + 1]; ++q) {
          int rp = row_pos[row_index_[q]];
          if (rp >= 0) cols[a].push_back({rp, values_[q]});
        }
      }
      SparseLu lu;
      if (!lu.factorize(k, cols)) {
        const auto& dep = lu.dependent_columns();
        const auto& free_rows = lu.unpivoted_rows();
        for (size_t d = 0; d < dep.size() && d < free_rows.size(); ++d) {
          int p = kernel_cols[dep[d]];
          int out = head_[p];
          int row = rows[free_rows[d]];
          set_nonbasic(out, default_nonbasic(out));
          head_[p] = n_ + row;
          pos_[n_ + row] = p;
          status_[n_ + row] = VarStatus::kBasic;
        }
        continue;
      }
      lu.inverse(kinv_);

      // kinv_ equals (A_RK)^-1: rows follow kernel columns, columns follow `rows`.
      std::fill(binv_.begin(), binv_.end(), 0.0);
      for (int a = 0; a < k; ++a) {
        double* dst = &binv_[static_cast<size_t>(kernel_cols[a]) * m_];
        const double* src = &kinv_[static_cast<size_t>(a) * k];
        for (int c = 0; c < k; ++c) dst[rows[c]] = src[c];
      }
      // Logical rows: B^-1 row = A_{i,K} * (A_RK)^-1 on the kernel rows, -1 on row i.
      std::vector<std::vector<std::pair<int, double>>> row_entries(m_);
      for (int a = 0; a < k; ++a) {
        int j = head_[kernel_cols[a]];
        for (int q = col_start_[j]; q < col_start_[j + 1]; ++q) {
          if (covered[row_index_[q]]) row_entries[row_index_[q]].push_back({a, values_[q]});
        }
      }
      for (int p = 0; p < m_; ++p) {
        if (head_[p] < n_) continue;
        int i = head_[p] - n_;
        double* dst = &binv_[static_cast<size_t>(p) * m_];
        dst[i] = -1.0;
        for (auto [a, v] : row_entries[i]) {
          const double* src = &kinv_[static_cast<size_t>(a) * k];
          for (int c = 0; c < k; ++c) dst[rows[c]] += v * src[c];
        }
      }
      return true;
    }
    return false;
  }

  // Column of variable j in sparse form (logicals are -e_i).
  kernels::SparseColumn column(int j) {
    if (j < n_) {
      int b = col_start_[j], e = col_start_[j + 1];
      return {std::span<const int>(row_index_.data() + b, e - b),
              std::span<const double>(values_.data() + b, e - b)};
    }
    logical_row_ = j - n_;
    return {std::span<const int>(&logical_row_, 1), std::span<const double>(&minus_one_, 1)};
  }

  void compute_primal() {
    std::vector<double> rhs(m_, 0.0);
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
      auto col = column(j);
      for (size_t k = 0; k < col.rows.size(); ++k) rhs[col.rows[k]] -= col.values[k] * x_[j];
    }
    for (int p = 0; p < m_; ++p) {
      const double* row = &binv_[static_cast<size_t>(p) * m_];
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += row[i] * rhs[i];
      x_[head_[p]] = s;
    }
  }

  double infeasibility(int j) const {
    if (x_[j] < lower_[j]) return lower_[j] - x_[j];
    if (x_[j] > upper_[j]) return x_[j] - upper_[j];
    return 0.0;
  }

  double max_infeasibility() const {
    double worst = 0.0;
    for (int p = 0; p < m_; ++p) worst = std::max(worst, infeasibility(head_[p]));
    return worst;
  }

  // phase 1: gradient of the infeasibility measure; phase 2: true costs.
  void compute_duals(int phase) {
    for (int p = 0; p < m_; ++p) {
      int j = head_[p];
      if (phase == 1) {
        cb_[p] = x_[j] < lower_[j] - opt_.primal_tolerance   ? 1.0
                 : x_[j] > upper_[j] + opt_.primal_tolerance ? -1.0
                                                             : 0.0;
      } else {
        cb_[p] = cost_[j];
      }
    }
    kernels::weighted_row_sum(inv(), cb_, y_, opt_.kernel_mode);
    if (phase == 1) {
      zero_cost_.assign(n_, 0.0);
      kernels::reduced_costs(col_start_, row_index_, values_, zero_cost_, y_,
                             std::span<double>(d_.data(), n_), opt_.kernel_mode);
    } else {
      kernels::reduced_costs(col_start_, row_index_, values_,
                             std::span<const double>(cost_.data(), n_), y_,
                             std::span<double>(d_.data(), n_), opt_.kernel_mode);
    }
    for (int i = 0; i < m_; ++i) d_[n_ + i] = y_[i];
    duals_valid_ = phase == 2;
  }

  void ensure_phase2_duals() {
    if (!duals_valid_) compute_duals(2);
  }

  bool is_fixed(int j) const { return upper_[j] - lower_[j] <= 0.0; }

  bool dual_feasible() {
    compute_duals(2);
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::kBasic || is_fixed(j)) continue;
      double d = d_[j];
      if (status_[j] == VarStatus::kAtLower && d > opt_.dual_tolerance) return false;
      if (status_[j] == VarStatus::kAtUpper && d < -opt_.dual_tolerance) return false;
      if (status_[j] == VarStatus::kZero && std::abs(d) > opt_.dual_tolerance) return false;
    }
    return true;
  }

  // `row_ready` means rho_ and row_alpha_ already hold row r of the old inverse times A.
  void pivot(int r, int q, int leaving_target_status, bool row_ready = false) {
    int out = head_[r];
    if (duals_valid_) {
      if (!row_ready) {
        std::copy_n(&binv_[static_cast<size_t>(r) * m_], m_, rho_.begin());
        kernels::row_times_columns(col_start_, row_index_, values_, rho_, row_alpha_,
                                   opt_.kernel_mode);
      }
      const double theta = d_[q] / alpha_[r];
      for (int j = 0; j < n_; ++j) d_[j] -= theta * row_alpha_[j];
      for (int i = 0; i < m_; ++i) {
        y_[i] += theta * rho_[i];
        d_[n_ + i] = y_[i];
      }
      d_[q] = 0.0;
      d_[out] = -theta;
    }
    status_[out] = static_cast<VarStatus>(leaving_target_status);
    pos_[out] = -1;
    head_[r] = q;
    pos_[q] = r;
    status_[q] = VarStatus::kBasic;
    kernels::pivot_update(inv(), r, alpha_, opt_.kernel_mode);
    ++since_refactor_;
  }

  bool past_deadline() const {
    if (opt_.deadline == std::chrono::steady_clock::time_point::max()) return false;
    return (iterations_ & 15) == 0 && std::chrono::steady_clock::now() >= opt_.deadline;
  }

  // --- primal simplex ------------------------------------------------------------------------
  // Widens the bounds of basic variables by tiny random amounts so degenerate vertices become
  // distinct. Nonbasic variables stay on their original bounds.
  void perturb_bounds() {
    saved_lower_ = lower_;
    saved_upper_ = upper_;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(iterations_));
    std::uniform_real_distribution<double> u(0.5, 1.0);
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (is_fixed(j)) continue;
      if (std::isfinite(lower_[j])) lower_[j] -= kPerturbation * (1.0 + std::abs(lower_[j])) * u(rng);
      if (std::isfinite(upper_[j])) upper_[j] += kPerturbation * (1.0 + std::abs(upper_[j])) * u(rng);
    }
    perturbed_ = true;
  }

  void restore_bounds() {
    lower_ = saved_lower_;
    upper_ = saved_upper_;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::kAtLower) x_[j] = lower_[j];
      else if (status_[j] == VarStatus::kAtUpper) x_[j] = upper_[j];
    }
    compute_primal();
    duals_valid_ = false;
    perturbed_ = false;
  }

  LpStatus primal_simplex() {
    int degenerate = 0;
    bool verified = false;
    bool tried_perturbation = false;
    for (;;) {
      if (iterations_ >= opt_.max_iterations || past_deadline()) {
        if (perturbed_) restore_bounds();
        return LpStatus::kIterationLimit;
      }
      if (!tried_perturbation && degenerate >= kPerturbAfterDegenerate) {
        perturb_bounds();
        tried_perturbation = true;
        degenerate = 0;
      }
      if (since_refactor_ >= opt_.refactor_interval) {
        if (!refactor()) return LpStatus::kNumericalFailure;
        compute_primal();
      }
      const int phase = max_infeasibility() > opt_.primal_tolerance ? 1 : 2;
      if (phase == 1) compute_duals(1);
      else ensure_phase2_duals();
      const bool bland = degenerate >= opt_.bland_after_degenerate;

      int q = -1;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (status_[j] == VarStatus::kBasic || is_fixed(j)) continue;
        double d = d_[j];
        double gain = 0.0;
        if (status_[j] == VarStatus::kAtLower) gain = d;
        else if (status_[j] == VarStatus::kAtUpper) gain = -d;
        else gain = std::abs(d);
        if (gain <= opt_.dual_tolerance) continue;
        if (bland) {
          q = j;
          break;
        }
        if (gain > best) {
          best = gain;
          q = j;
        }
      }
      if (q < 0) {
        // Confirm on a fresh factorization before declaring the outcome.
        if (perturbed_) {
          // Back to the true bounds; the remaining cleanup is usually a few pivots.
          restore_bounds();
          degenerate = 0;
          continue;
        }
        if (!verified && since_refactor_ > 0) {
          if (!refactor()) return LpStatus::kNumericalFailure;
          compute_primal();
          verified = true;
          continue;
        }
        return phase == 1 ? LpStatus::kInfeasible : LpStatus::kOptimal;
      }
      verified = false;
      const double dir = status_[q] == VarStatus::kAtUpper ? -1.0
                         : status_[q] == VarStatus::kAtLower ? 1.0
                         : (d_[q] > 0 ? 1.0 : -1.0);
      kernels::apply_to_sparse(inv(), column(q), alpha_, opt_.kernel_mode);

      // Harris two-pass ratio test.
      const double tol = opt_.primal_tolerance;
      double theta_max = kInf;
      if (std::isfinite(lower_[q]) && std::isfinite(upper_[q])) theta_max = upper_[q] - lower_[q];
      double relaxed = theta_max;
      for (int p = 0; p < m_; ++p) {
        double a = alpha_[p];
        if (std::abs(a) <= opt_.pivot_tolerance) continue;
        double rate = -dir * a;
        int j = head_[p];
        double v = x_[j];
        double lim = kInf;
        if (rate > 0) {
          if (phase == 1 && v < lower_[j] - tol) lim = (lower_[j] + tol - v) / rate;
          else if (v <= upper_[j] + tol && std::isfinite(upper_[j])) lim = (upper_[j] + tol - v) / rate;
        } else {
          if (phase == 1 && v > upper_[j] + tol) lim = (v - upper_[j] + tol) / -rate;
          else if (v >= lower_[j] - tol && std::isfinite(lower_[j])) lim = (v - lower_[j] + tol) / -rate;
        }
        relaxed = std::min(relaxed, lim);
      }
      int leave = -1;
      double theta = theta_max;
      double leave_target = 0.0;
      double best_pivot = 0.0;
      if (std::isfinite(relaxed)) {
        for (int p = 0; p < m_; ++p) {
          double a = alpha_[p];
          if (std::abs(a) <= opt_.pivot_tolerance) continue;
          double rate = -dir * a;
          int j = head_[p];
          double v = x_[j];
          double lim = kInf, target = 0.0;
          if (rate > 0) {
            if (phase == 1 && v < lower_[j] - tol) {
              lim = (lower_[j] - v) / rate;
              target = lower_[j];
            } else if (v <= upper_[j] + tol && std::isfinite(upper_[j])) {
              lim = (upper_[j] - v) / rate;
              target = upper_[j];
            }
          } else {
            if (phase == 1 && v > upper_[j] + tol) {
              lim = (v - upper_[j]) / -rate;
              target = upper_[j];
            } else if (v >= lower_[j] - tol && std::isfinite(lower_[j])) {
              lim = (v - lower_[j]) / -rate;
              target = lower_[j];
            }
          }
          if (lim > relaxed) continue;
          bool better = bland ? (leave < 0 || j < head_[leave]) : std::abs(a) > best_pivot;
          if (better) {
            best_pivot = std::abs(a);
            leave = p;
            theta = std::max(lim, 0.0);
            leave_target = target;
          }
        }
      }
      if (leave >= 0 && theta_max <= theta) leave = -1;  // bound flip comes first
      if (leave < 0 && !std::isfinite(theta_max)) {
        if (perturbed_) restore_bounds();
        if (phase == 2) return LpStatus::kUnbounded;
        return LpStatus::kNumericalFailure;
      }
      if (leave < 0) theta = theta_max;

      ++iterations_;
      degenerate = theta <= tol ? degenerate + 1 : 0;
      x_[q] += dir * theta;
      for (int p = 0; p < m_; ++p) {
        if (alpha_[p] != 0.0) x_[head_[p]] -= dir * theta * alpha_[p];
      }
      if (leave < 0) {
        set_nonbasic(q, dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower);
        continue;
      }
      int out = head_[leave];
      x_[out] = leave_target;
      VarStatus out_status = leave_target == lower_[out] ? VarStatus::kAtLower : VarStatus::kAtUpper;
      pivot(leave, q, static_cast<int>(out_status));
    }
  }

  // --- dual simplex --------------------------------------------------------------------------
  LpStatus dual_simplex() {
    for (;;) {
      if (iterations_ >= opt_.max_iterations || past_deadline()) return LpStatus::kIterationLimit;
      if (since_refactor_ >= opt_.refactor_interval) {
        if (!refactor()) return LpStatus::kNumericalFailure;
        compute_primal();
      }
      int r = -1;
      double worst = opt_.primal_tolerance;
      for (int p = 0; p < m_; ++p) {
        double inf = infeasibility(head_[p]);
        if (inf > worst) {
          worst = inf;
          r = p;
        }
      }
      if (r < 0) return LpStatus::kOptimal;
      ensure_phase2_duals();
      const int out = head_[r];
      const bool to_lower = x_[out] < lower_[out];
      const double target = to_lower ? lower_[out] : upper_[out];
      const double delta = target - x_[out];
      const double s = delta > 0 ? 1.0 : -1.0;

      std::copy_n(&binv_[static_cast<size_t>(r) * m_], m_, rho_.begin());
      kernels::row_times_columns(col_start_, row_index_, values_, rho_, row_alpha_,
                                 opt_.kernel_mode);
      auto row_entry = [&](int j) { return j < n_ ? row_alpha_[j] : -rho_[j - n_]; };

      // Harris ratio test on reduced costs.
      const double dtol = opt_.dual_tolerance;
      double relaxed = kInf;
      for (int j = 0; j < total_; ++j) {
        if (status_[j] == VarStatus::kBasic || is_fixed(j)) continue;
        double a = row_entry(j);
        if (std::abs(a) <= opt_.pivot_tolerance) continue;
        bool eligible = (status_[j] == VarStatus::kAtLower && a * s < 0) ||
                        (status_[j] == VarStatus::kAtUpper && a * s > 0) ||
                        status_[j] == VarStatus::kZero;
        if (!eligible) continue;
        relaxed = std::min(relaxed, (std::abs(d_[j]) + dtol) / std::abs(a));
      }
      if (!std::isfinite(relaxed)) return LpStatus::kInfeasible;
      int q = -1;
      double best_pivot = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (status_[j] == VarStatus::kBasic || is_fixed(j)) continue;
        double a = row_entry(j);
        if (std::abs(a) <= opt_.pivot_tolerance) continue;
        bool eligible = (status_[j] == VarStatus::kAtLower && a * s < 0) ||
                        (status_[j] == VarStatus::kAtUpper && a * s > 0) ||
                        status_[j] == VarStatus::kZero;
        if (!eligible) continue;
        if (std::abs(d_[j]) / std::abs(a) > relaxed) continue;
        if (std::abs(a) > best_pivot) {
          best_pivot = std::abs(a);
          q = j;
        }
      }
      if (q < 0) return LpStatus::kInfeasible;

      kernels::apply_to_sparse(inv(), column(q), alpha_, opt_.kernel_mode);
      if (std::abs(alpha_[r]) <= opt_.pivot_tolerance) {
        if (since_refactor_ == 0) return LpStatus::kNumericalFailure;
        if (!refactor()) return LpStatus::kNumericalFailure;
        compute_primal();
        continue;
      }
      ++iterations_;
      const double step = delta / -alpha_[r];
      x_[q] += step;
      for (int p = 0; p < m_; ++p) {
        if (alpha_[p] != 0.0) x_[head_[p]] -= step * alpha_[p];
      }
      x_[out] = target;
      pivot(r, q, static_cast<int>(to_lower ? VarStatus::kAtLower : VarStatus::kAtUpper), true);
    }
  }

  // --- output --------------------------------------------------------------------------------
  LpResult& finish(LpResult& result) {
    result.iterations = iterations_;
    result.x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) result.x[j] = x_[j] * col_scale_[j];
    result.row_activity.assign(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        int i = row_index_[k];
        result.row_activity[i] += values_[k] / row_scale_[i] * x_[j];
      }
    }
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += cost_[j] / obj_scale_ / col_scale_[j] * result.x[j];
    result.objective = obj;
    result.basis.status = status_;
    return result;
  }

  SimplexOptions opt_;
  int n_, m_, total_;
  std::vector<int> col_start_, row_index_;
  std::vector<double> values_;
  std::vector<double> col_scale_, row_scale_;
  double obj_scale_ = 1.0;
  std::vector<double> lower_, upper_, cost_, zero_cost_;
  std::vector<double> saved_lower_, saved_upper_;
  bool perturbed_ = false;
  static constexpr double kPerturbation = 1e-7;
  static constexpr int kPerturbAfterDegenerate = 30;
  std::vector<double> x_;
  std::vector<VarStatus> status_;
  std::vector<int> pos_, head_;
  std::vector<double> binv_, kinv_, y_, d_, alpha_, cb_, row_alpha_, rho_;
  bool duals_valid_ = false;
  long iterations_ = 0;
  int since_refactor_ = 0;
  int logical_row_ = 0;
  double minus_one_ = -1.0;
};

}  // namespace

LpResult RevisedSimplex::solve(const LinearProgram& lp, std::span<const double> col_lower,
                               std::span<const double> col_upper, const Basis* warm) const {
  Engine engine(lp, col_lower, col_upper, options_);
  return engine.run(warm);
}

}  // namespace pdra::lp
