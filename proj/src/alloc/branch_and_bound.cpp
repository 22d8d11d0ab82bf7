#include "pdra/alloc/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <queue>

namespace pdra {

namespace {

constexpr double kIntegrality = 1e-6;

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void clamp_nonnegative(std::vector<std::vector<double>>& v) {
  for (auto& row : v) {
    for (auto& x : row) x = std::max(x, 0.0);
  }
}

// Reads C and B values out of an LP point.
void read_flows(const MilpModel& m, const std::vector<double>& x,
                std::vector<std::vector<double>>& c, std::vector<std::vector<double>>& b) {
  const auto& p = m.problem;
  c.assign(p.edges.size(), std::vector<double>(p.num_links(), 0.0));
  b.assign(p.num_tasks(), std::vector<double>(p.num_links(), 0.0));
  for (size_t e = 0; e < p.edges.size(); ++e) {
    for (int l = 0; l < p.num_links(); ++l) c[e][l] = x[m.c_col[e][l]];
  }
  for (int t = 0; t < p.num_tasks(); ++t) {
    for (int l = 0; l < p.num_links(); ++l) {
      if (m.b_col[t][l] >= 0) b[t][l] = x[m.b_col[t][l]];
    }
  }
  clamp_nonnegative(c);
  clamp_nonnegative(b);
}

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& m, const SolveOptions& opt)
      : m_(m), opt_(opt), start_(Clock::now()), solver_(make_options(opt, start_)) {
    root_lower_ = m.lp.col_lower;
    root_upper_ = m.lp.col_upper;
  }

  AllocationSolution run() {
    const auto& p = m_.problem;
    auto root = solver_.solve(m_.lp, root_lower_, root_upper_, nullptr);
    if (root.status == lp::LpStatus::kInfeasible) return finish(SolveStatus::kInfeasible, -lp::kInf);
    if (root.status != lp::LpStatus::kOptimal) return finish(SolveStatus::kTimeout, lp::kInf);
    ++nodes_;
    granularity_ = objective_granularity();
    try_simple_assignments(root.basis);
    dive(root);

    auto root_node = std::make_shared<Node>();
    root_node->bound = root.objective;
    root_node->basis = std::make_shared<lp::Basis>(std::move(root.basis));
    root_node->solved = std::make_shared<lp::LpResult>(std::move(root));
    open_.push(root_node);

    while (!open_.empty()) {
      if (out_of_budget()) break;
      auto node = open_.top();
      open_.pop();
      if (node->bound <= incumbent_obj_ + prune_tolerance()) continue;
      lp::LpResult r;
      if (node->solved) {
        r = std::move(*node->solved);
        node->solved.reset();
      } else {
        auto [lo, hi] = bounds_of(*node);
        r = solver_.solve(m_.lp, lo, hi, node->basis.get());
        if (r.status != lp::LpStatus::kOptimal && r.status != lp::LpStatus::kInfeasible)
          r = solver_.solve(m_.lp, lo, hi, nullptr);
        ++nodes_;
      }
      if (r.status == lp::LpStatus::kOptimal && node->branch_col >= 0)
        learn(node->branch_col, node->branch_up, node->parent_obj - r.objective, node->branch_dist);
      if (r.status == lp::LpStatus::kInfeasible) continue;
      if (r.status != lp::LpStatus::kOptimal && out_of_budget()) {
        open_.push(node);
        break;
      }
      if (r.status != lp::LpStatus::kOptimal) {
        unresolved_bound_ = std::max(unresolved_bound_, node->bound);
        continue;
      }
      // The parent bound is valid; the child's own can only be tighter.
      const double bound = round_bound(std::min(r.objective, node->bound));
      if (bound <= incumbent_obj_ + prune_tolerance()) continue;

      if (most_fractional(r.x).first < 0) {
        consider_integral(r);
        continue;
      }
      if ((nodes_ & (nodes_ - 1)) == 0) {
        dive(r);
        if (bound <= incumbent_obj_ + prune_tolerance()) continue;
      }
      const int col = select_branch(*node, r);
      if (col < 0) continue;
      const double v = r.x[col];
      auto basis = std::make_shared<lp::Basis>(std::move(r.basis));
      for (int value : {1, 0}) {
        auto child = std::make_shared<Node>();
        child->bound = bound;
        child->id = next_id_++;
        child->fixes = node->fixes;
        child->fixes.push_back({col, value});
        child->basis = basis;
        child->branch_col = col;
        child->branch_up = value == 1;
        child->branch_dist = value == 1 ? 1.0 - v : v;
        child->parent_obj = r.objective;
        open_.push(child);
      }
      (void)p;
    }

    double open_bound = unresolved_bound_;
    if (!open_.empty()) open_bound = std::max(open_bound, open_.top()->bound);
    if (!has_incumbent_) return finish(open_.empty() && unresolved_bound_ == -lp::kInf
                                           ? SolveStatus::kInfeasible
                                           : SolveStatus::kTimeout,
                                       open_bound);
    if (open_bound <= incumbent_obj_ + prune_tolerance()) return finish(SolveStatus::kOptimal, incumbent_obj_);
    return finish(SolveStatus::kFeasible, open_bound);
  }

 private:
  struct Node {
    double bound = 0.0;
    long id = 0;
    // Branching that created this node, for pseudocost updates.
    int branch_col = -1;
    bool branch_up = false;
    double branch_dist = 0.0;
    double parent_obj = 0.0;
    std::vector<std::pair<int, int>> fixes;
    std::shared_ptr<const lp::Basis> basis;
    std::shared_ptr<lp::LpResult> solved;
  };
  struct NodeOrder {
    bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
      if (a->bound != b->bound) return a->bound < b->bound;
      return a->id > b->id;
    }
  };

  static lp::SimplexOptions make_options(const SolveOptions& opt, Clock::time_point start) {
    lp::SimplexOptions s;
    s.kernel_mode = opt.kernel_mode;
    if (opt.time_budget_s > 0)
      s.deadline = start + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(opt.time_budget_s));
    return s;
  }

  // When only X carries objective weight and all weights are integer multiples of some g,
  // every integral objective is a multiple of g and bounds can be rounded down to one.
  double objective_granularity() const {
    const auto& p = m_.problem;
    std::vector<char> is_x(m_.lp.num_cols(), 0);
    for (const auto& row : m_.x_col) {
      for (int col : row) is_x[col] = 1;
    }
    double g = 0.0;
    for (int col = 0; col < m_.lp.num_cols(); ++col) {
      double c = std::abs(m_.lp.objective[col]);
      if (c == 0.0 || m_.lp.col_upper[col] == 0.0) continue;
      if (!is_x[col]) return 0.0;
      g = g == 0.0 ? c : std::min(g, c);
    }
    if (g == 0.0) return 0.0;
    for (int col = 0; col < m_.lp.num_cols(); ++col) {
      double q = m_.lp.objective[col] / g;
      if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, std::abs(q))) return 0.0;
    }
    (void)p;
    return g;
  }

  double round_bound(double bound) const {
    if (granularity_ <= 0.0) return bound;
    return granularity_ * std::floor(bound / granularity_ + 1e-7);
  }

  double prune_tolerance() const { return 1e-9 * std::max(1.0, std::abs(incumbent_obj_)); }

  bool out_of_budget() const {
    if (opt_.node_limit > 0 && nodes_ >= opt_.node_limit) return true;
    return opt_.time_budget_s > 0 && elapsed_s(start_) >= opt_.time_budget_s;
  }

  std::pair<std::vector<double>, std::vector<double>> bounds_of(const Node& node) const {
    auto lo = root_lower_, hi = root_upper_;
    for (auto [col, value] : node.fixes) lo[col] = hi[col] = value;
    return {lo, hi};
  }

  struct Pseudocost {
    double sum[2] = {0.0, 0.0};  // down, up: objective loss per unit of distance
    int count[2] = {0, 0};
  };

  void learn(int col, bool up, double loss, double dist) {
    if (!(dist > kIntegrality)) return;
    auto& pc = pcost_[col];
    pc.sum[up] += std::max(0.0, loss) / dist;
    ++pc.count[up];
  }

  double average_pseudocost(int dir) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& [col, pc] : pcost_) {
      if (pc.count[dir] == 0) continue;
      sum += pc.sum[dir] / pc.count[dir];
      ++n;
    }
    return n ? sum / n : 1.0;
  }

  // Pseudocost branching. Candidates without history on both sides get strong branching first,
  // most fractional first and at most kStrongCandidates per node. Ties go to the lowest column.
  int select_branch(const Node& node, const lp::LpResult& r) {
    const auto& p = m_.problem;
    std::vector<std::pair<double, int>> frac;  // (-fractionality, column)
    for (int t = 0; t < p.num_tasks(); ++t) {
      for (int j = 0; j < p.num_robots(); ++j) {
        const int col = m_.x_col[t][j];
        const double v = r.x[col];
        if (v > kIntegrality && v < 1.0 - kIntegrality)
          frac.push_back({-std::min(v, 1.0 - v), col});
      }
    }
    if (frac.empty()) return -1;
    std::sort(frac.begin(), frac.end());
    int strong = 0;
    for (const auto& [neg, col] : frac) {
      const auto it = pcost_.find(col);
      if (it != pcost_.end() && it->second.count[0] > 0 && it->second.count[1] > 0) continue;
      if (strong++ >= kStrongCandidates || out_of_budget()) break;
      auto [lo, hi] = bounds_of(node);
      for (int value : {0, 1}) {
        lo[col] = hi[col] = value;
        const auto child = solver_.solve(m_.lp, lo, hi, &r.basis);
        const double dist = value == 1 ? 1.0 - r.x[col] : r.x[col];
        if (child.status == lp::LpStatus::kOptimal) {
          learn(col, value == 1, r.objective - child.objective, dist);
        } else if (child.status == lp::LpStatus::kInfeasible) {
          learn(col, value == 1, kInfeasibleLoss, dist);
        }
      }
    }
    const double avg[2] = {average_pseudocost(0), average_pseudocost(1)};
    int best_col = -1;
    double best_score = -1.0;
    for (const auto& [neg, col] : frac) {
      const double v = r.x[col];
      double est[2];
      for (int dir : {0, 1}) {
        const auto it = pcost_.find(col);
        const double unit = it != pcost_.end() && it->second.count[dir] > 0
                                ? it->second.sum[dir] / it->second.count[dir]
                                : avg[dir];
        est[dir] = unit * (dir == 1 ? 1.0 - v : v);
      }
      const double score = std::max(est[0], 1e-6) * std::max(est[1], 1e-6);
      if (score > best_score || (score == best_score && col < best_col)) {
        best_score = score;
        best_col = col;
      }
    }
    return best_col;
  }

  std::pair<int, int> most_fractional(const std::vector<double>& x) const {
    const auto& p = m_.problem;
    int bt = -1, bj = -1;
    double best = kIntegrality;
    for (int t = 0; t < p.num_tasks(); ++t) {
      for (int j = 0; j < p.num_robots(); ++j) {
        double v = x[m_.x_col[t][j]];
        double frac = std::min(v, 1.0 - v);
        if (frac > best) {
          best = frac;
          bt = t;
          bj = j;
        }
      }
    }
    return {bt, bj};
  }

  // X of `r` is integral: round it, re-solve the flows with X fixed, keep if better.
  void consider_integral(const lp::LpResult& r) {
    const auto& p = m_.problem;
    std::vector<int> exec(p.num_tasks(), -1);
    for (int t = 0; t < p.num_tasks(); ++t) {
      for (int j = 0; j < p.num_robots(); ++j) {
        if (r.x[m_.x_col[t][j]] > 0.5) exec[t] = j;
      }
    }
    consider_assignment(exec, &r.basis);
  }

  // Owner-first assignments with and without the optional tasks.
  void try_simple_assignments(const lp::Basis& basis) {
    const auto& p = m_.problem;
    for (bool with_optional : {true, false}) {
      std::vector<int> exec(p.num_tasks(), -1);
      for (int t = 0; t < p.num_tasks(); ++t) {
        const auto& task = p.tasks[t];
        if (!task.required && !with_optional) continue;
        if (task.allowed.empty()) return;
        exec[t] = p.allowed(t, task.owner) ? task.owner : task.allowed.front();
      }
      consider_assignment(exec, &basis);
    }
  }

  // Evaluates a complete assignment (-1 = skipped) through the flow LP.
  void consider_assignment(const std::vector<int>& exec, const lp::Basis* basis) {
    const auto& p = m_.problem;
    auto lo = root_lower_, hi = root_upper_;
    auto sol = empty_solution(p);
    for (int t = 0; t < p.num_tasks(); ++t) {
      for (int j = 0; j < p.num_robots(); ++j) {
        int col = m_.x_col[t][j];
        double v = exec[t] == j ? 1.0 : 0.0;
        if (v > root_upper_[col]) return;
        lo[col] = hi[col] = v;
        sol.x[t][j] = v;
      }
    }
    auto fixed = solver_.solve(m_.lp, lo, hi, basis);
    if (fixed.status != lp::LpStatus::kOptimal && fixed.status != lp::LpStatus::kInfeasible)
      fixed = solver_.solve(m_.lp, lo, hi, nullptr);
    if (fixed.status != lp::LpStatus::kOptimal) return;
    read_flows(m_, fixed.x, sol.c, sol.b);
    double obj = objective_value(sol, p, p.alpha);
    if (!has_incumbent_ || obj > incumbent_obj_) {
      has_incumbent_ = true;
      incumbent_obj_ = obj;
      incumbent_ = std::move(sol);
    }
  }

  // Rounds towards the largest fractional X until integral or infeasible.
  void dive(const lp::LpResult& root) {
    const auto& p = m_.problem;
    auto lo = root_lower_, hi = root_upper_;
    lp::LpResult cur = root;
    for (int step = 0; step < 2 * p.num_tasks() + 2; ++step) {
      if (out_of_budget()) return;
      int bt = -1, bj = -1;
      double best = -1.0;
      for (int t = 0; t < p.num_tasks(); ++t) {
        for (int j = 0; j < p.num_robots(); ++j) {
          double v = cur.x[m_.x_col[t][j]];
          if (v > kIntegrality && v < 1.0 - kIntegrality && v > best) {
            best = v;
            bt = t;
            bj = j;
          }
        }
      }
      if (bt < 0) {
        consider_integral(cur);
        return;
      }
      const int col = m_.x_col[bt][bj];
      lo[col] = hi[col] = 1.0;
      auto next = solver_.solve(m_.lp, lo, hi, &cur.basis);
      ++nodes_;
      if (next.status != lp::LpStatus::kOptimal) {
        lo[col] = hi[col] = 0.0;
        next = solver_.solve(m_.lp, lo, hi, &cur.basis);
        ++nodes_;
        if (next.status != lp::LpStatus::kOptimal) return;
      }
      cur = std::move(next);
    }
  }

  AllocationSolution finish(SolveStatus status, double bound) {
    AllocationSolution sol = has_incumbent_ ? incumbent_ : empty_solution(m_.problem);
    sol.status = status;
    sol.nodes = nodes_;
    if (has_incumbent_) {
      sol.objective = incumbent_obj_;
      sol.gap = status == SolveStatus::kOptimal ? 0.0 : relative_gap(bound, incumbent_obj_);
    } else {
      sol.objective = 0.0;
      sol.gap = status == SolveStatus::kInfeasible ? 0.0 : lp::kInf;
    }
    sol.solve_time_s = elapsed_s(start_);
    return sol;
  }

  const MilpModel& m_;
  SolveOptions opt_;
  Clock::time_point start_;
  lp::RevisedSimplex solver_;
  std::vector<double> root_lower_, root_upper_;
  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> open_;
  long next_id_ = 1;
  long nodes_ = 0;
  bool has_incumbent_ = false;
  double incumbent_obj_ = -lp::kInf;
  AllocationSolution incumbent_;
  double unresolved_bound_ = -lp::kInf;
  std::map<int, Pseudocost> pcost_;
  static constexpr int kStrongCandidates = 8;
  static constexpr double kInfeasibleLoss = 1e6;
  double granularity_ = 0.0;
};

}  // namespace

double relative_gap(double bound, double incumbent) {
  return std::max(0.0, bound - incumbent) / std::max(std::abs(incumbent), 1.0);
}

FlowSolution solve_flow_lp(const MilpModel& m, const std::vector<std::vector<int>>& x_fixed) {
  const auto& p = m.problem;
  lp::LinearProgram lp = m.lp;
  std::fill(lp.objective.begin(), lp.objective.end(), 0.0);
  for (int t = 0; t < p.num_tasks(); ++t) {
    for (int l = 0; l < p.num_links(); ++l) {
      if (m.b_col[t][l] < 0) continue;
      const auto& c = p.links[l].coding;
      lp.objective[m.b_col[t][l]] = -(c.encode_energy_j_per_bit + c.decode_energy_j_per_bit);
    }
  }
  for (int t = 0; t < p.num_tasks(); ++t) {
    for (int j = 0; j < p.num_robots(); ++j) {
      int col = m.x_col[t][j];
      lp.col_lower[col] = lp.col_upper[col] = x_fixed[t][j] ? 1.0 : 0.0;
    }
  }
  FlowSolution out;
  auto r = lp::RevisedSimplex().solve(lp);
  if (r.status != lp::LpStatus::kOptimal) return out;
  out.feasible = true;
  read_flows(m, r.x, out.c, out.b);
  double energy = 0.0;
  for (int t = 0; t < p.num_tasks(); ++t) {
    for (int l = 0; l < p.num_links(); ++l) {
      const auto& c = p.links[l].coding;
      energy += (c.encode_energy_j_per_bit + c.decode_energy_j_per_bit) * out.b[t][l];
    }
  }
  out.flow_objective = -energy;
  return out;
}

AllocationSolution solve_exact(const MilpModel& model, const SolveOptions& options) {
  return BranchAndBound(model, options).run();
}

AllocationSolution solve_exact(const MilpModel& model, double time_budget_s) {
  SolveOptions o;
  o.time_budget_s = time_budget_s;
  return solve_exact(model, o);
}

}  // namespace pdra
