#include "pdra/alloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pdra {

int DenseLp::add_var(double cost) {
  for (auto& row : a) row.push_back(0.0);
  c.push_back(cost);
  return num_vars++;
}

void DenseLp::add_row(std::vector<double> coeffs, Sense s, double rhs) {
  coeffs.resize(num_vars, 0.0);
  a.push_back(std::move(coeffs));
  sense.push_back(s);
  b.push_back(rhs);
}

namespace {

constexpr double kEps = 1e-10;

struct Tableau {
  int rows = 0, cols = 0;  // cols excludes the rhs column
  std::vector<std::vector<double>> t;  // rows x (cols + 1)
  std::vector<int> basis;

  void pivot(int r, int q) {
    double piv = t[r][q];
    for (auto& v : t[r]) v /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      double f = t[i][q];
      if (f == 0.0) continue;
      for (int k = 0; k <= cols; ++k) t[i][k] -= f * t[r][k];
    }
    basis[r] = q;
  }

  // Maximizes cost over the current basis, skipping barred columns. Returns false if unbounded.
  bool optimize(const std::vector<double>& cost, const std::vector<char>& barred) {
    for (int iter = 0; iter < 100000; ++iter) {
      int q = -1;
      for (int k = 0; k < cols && q < 0; ++k) {
        if (barred[k] || std::find(basis.begin(), basis.end(), k) != basis.end()) continue;
        double d = cost[k];
        for (int i = 0; i < rows; ++i) d -= cost[basis[i]] * t[i][k];
        if (d > kEps) q = k;
      }
      if (q < 0) return true;
      int r = -1;
      double best = 0.0;
      for (int i = 0; i < rows; ++i) {
        if (t[i][q] <= kEps) continue;
        double ratio = t[i][cols] / t[i][q];
        if (r < 0 || ratio < best - kEps || (std::abs(ratio - best) <= kEps && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      pivot(r, q);
    }
    return true;
  }
};

}  // namespace

DenseLpResult solve_dense_lp(const DenseLp& lp) {
  const int m = static_cast<int>(lp.a.size());
  const int n = lp.num_vars;
  // Columns: structurals, one slack/surplus per inequality, one artificial per >= or = row.
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  int cols = n;
  std::vector<DenseLp::Sense> sense = lp.sense;
  std::vector<double> sign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    if (lp.b[i] < 0) {
      sign[i] = -1.0;
      if (sense[i] == DenseLp::kLe) sense[i] = DenseLp::kGe;
      else if (sense[i] == DenseLp::kGe) sense[i] = DenseLp::kLe;
    }
    if (sense[i] != DenseLp::kEq) slack_col[i] = cols++;
  }
  for (int i = 0; i < m; ++i) {
    if (sense[i] != DenseLp::kLe) art_col[i] = cols++;
  }
  Tableau tab;
  tab.rows = m;
  tab.cols = cols;
  tab.t.assign(m, std::vector<double>(cols + 1, 0.0));
  tab.basis.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab.t[i][j] = sign[i] * lp.a[i][j];
    tab.t[i][cols] = sign[i] * lp.b[i];
    if (slack_col[i] >= 0) tab.t[i][slack_col[i]] = sense[i] == DenseLp::kLe ? 1.0 : -1.0;
    if (art_col[i] >= 0) {
      tab.t[i][art_col[i]] = 1.0;
      tab.basis[i] = art_col[i];
    } else {
      tab.basis[i] = slack_col[i];
    }
  }
  std::vector<char> barred(cols, 0);
  std::vector<double> phase1(cols, 0.0);
  bool any_art = false;
  for (int i = 0; i < m; ++i) {
    if (art_col[i] >= 0) {
      phase1[art_col[i]] = -1.0;
      any_art = true;
    }
  }
  DenseLpResult out;
  if (any_art) {
    tab.optimize(phase1, barred);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (phase1[tab.basis[i]] < 0) infeas += tab.t[i][cols];
    }
    if (infeas > 1e-8) return out;
    for (int i = 0; i < m; ++i) {
      if (art_col[i] >= 0) barred[art_col[i]] = 1;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (phase1[tab.basis[i]] >= 0) continue;
      for (int k = 0; k < cols; ++k) {
        if (!barred[k] && std::abs(tab.t[i][k]) > 1e-9) {
          tab.pivot(i, k);
          break;
        }
      }
    }
  }
  std::vector<double> cost(cols, 0.0);
  for (int j = 0; j < n; ++j) cost[j] = lp.c[j];
  out.feasible = true;
  if (!tab.optimize(cost, barred)) {
    out.unbounded = true;
    return out;
  }
  out.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) out.x[tab.basis[i]] = tab.t[i][cols];
  }
  for (int j = 0; j < n; ++j) out.objective += lp.c[j] * out.x[j];
  return out;
}

namespace {

using Path = std::vector<int>;  // link indices

std::vector<Path> simple_paths(const ProblemInstance& p, int from, int to) {
  std::vector<Path> out;
  std::vector<char> visited(p.num_robots(), 0);
  Path cur;
  std::function<void(int)> dfs = [&](int node) {
    if (node == to) {
      out.push_back(cur);
      return;
    }
    visited[node] = 1;
    for (int l = 0; l < p.num_links(); ++l) {
      if (p.links[l].from != node || visited[p.links[l].to]) continue;
      cur.push_back(l);
      dfs(p.links[l].to);
      cur.pop_back();
    }
    visited[node] = 0;
  };
  dfs(from);
  return out;
}

struct Candidate {
  bool feasible = false;
  double objective = 0.0;
  AllocationSolution sol;
};

Candidate evaluate(const ProblemInstance& p, double alpha, const std::vector<int>& exec) {
  Candidate cand;
  const int nr = p.num_robots(), nt = p.num_tasks(), nl = p.num_links();
  const int ne = static_cast<int>(p.edges.size());
  const double T = p.period_s;

  std::vector<double> load(nr, 0.0);
  double reward = 0.0, power = 0.0;
  for (int t = 0; t < nt; ++t) {
    if (exec[t] < 0) continue;
    load[exec[t]] += p.load[t][exec[t]];
    reward += p.tasks[t].reward;
    power += p.power[t][exec[t]];
  }
  for (int j = 0; j < nr; ++j) {
    if (load[j] > p.max_cores[j] + 1e-9) return cand;
  }

  DenseLp lp;
  struct EdgePaths {
    int edge;
    std::vector<Path> paths;
    std::vector<int> vars;
  };
  std::vector<EdgePaths> active;
  for (int e = 0; e < ne; ++e) {
    int src = exec[p.edges[e].parent], dst = exec[p.edges[e].child];
    if (dst < 0) continue;
    if (src < 0) return cand;  // consumer without a producer
    if (src == dst) continue;
    EdgePaths ep{e, simple_paths(p, src, dst), {}};
    if (ep.paths.empty()) return cand;
    for (size_t k = 0; k < ep.paths.size(); ++k) ep.vars.push_back(lp.add_var(0.0));
    active.push_back(std::move(ep));
  }
  // One B variable per (task, link) that some path of the task uses.
  std::vector<std::vector<int>> b_var(nt, std::vector<int>(nl, -1));
  for (const auto& ep : active) {
    int t = p.edges[ep.edge].parent;
    for (const auto& path : ep.paths) {
      for (int l : path) {
        if (b_var[t][l] >= 0) continue;
        const auto& c = p.links[l].coding;
        b_var[t][l] = lp.add_var(-(1.0 - alpha) * (c.encode_energy_j_per_bit + c.decode_energy_j_per_bit));
      }
    }
  }
  for (const auto& ep : active) {
    const int t = p.edges[ep.edge].parent;
    const double d = p.tasks[t].product_bits;
    std::vector<double> demand(lp.num_vars, 0.0), latency(lp.num_vars, 0.0);
    for (size_t k = 0; k < ep.paths.size(); ++k) {
      demand[ep.vars[k]] = 1.0;
      double path_latency = 0.0;
      for (int l : ep.paths[k]) path_latency += p.links[l].latency_s + d / p.links[l].throughput_bps;
      latency[ep.vars[k]] = path_latency * T / d;
    }
    lp.add_row(demand, DenseLp::kEq, d / T);
    if (p.edges[ep.edge].max_latency_s < 1e29) lp.add_row(latency, DenseLp::kLe, p.edges[ep.edge].max_latency_s);
    for (int l = 0; l < nl; ++l) {
      if (b_var[t][l] < 0) continue;
      std::vector<double> row(lp.num_vars, 0.0);
      row[b_var[t][l]] = 1.0;
      bool used = false;
      for (size_t k = 0; k < ep.paths.size(); ++k) {
        if (std::find(ep.paths[k].begin(), ep.paths[k].end(), l) != ep.paths[k].end()) {
          row[ep.vars[k]] = -1.0;
          used = true;
        }
      }
      if (used) lp.add_row(row, DenseLp::kGe, 0.0);
    }
  }
  for (int l = 0; l < nl; ++l) {
    std::vector<double> row(lp.num_vars, 0.0);
    bool any = false;
    for (int t = 0; t < nt; ++t) {
      if (b_var[t][l] >= 0) {
        row[b_var[t][l]] = 1.0;
        any = true;
      }
    }
    if (any) lp.add_row(row, DenseLp::kLe, p.links[l].throughput_bps);
  }
  for (int j = 0; j < nr; ++j) {
    std::vector<double> row(lp.num_vars, 0.0);
    bool any = false;
    for (int l = 0; l < nl; ++l) {
      const auto& link = p.links[l];
      double coef = (link.to == j ? link.coding.decode_load_per_bps : 0.0) +
                    (link.from == j ? link.coding.encode_load_per_bps : 0.0);
      if (coef == 0.0) continue;
      for (int t = 0; t < nt; ++t) {
        if (b_var[t][l] >= 0) {
          row[b_var[t][l]] = coef;
          any = true;
        }
      }
    }
    if (any) lp.add_row(row, DenseLp::kLe, p.max_cores[j] - load[j]);
  }

  DenseLpResult r;
  if (lp.num_vars > 0) {
    r = solve_dense_lp(lp);
    if (!r.feasible || r.unbounded) return cand;
  } else {
    r.feasible = true;
  }

  cand.feasible = true;
  cand.sol = empty_solution(p);
  for (int t = 0; t < nt; ++t) {
    if (exec[t] >= 0) cand.sol.x[t][exec[t]] = 1.0;
  }
  for (const auto& ep : active) {
    for (size_t k = 0; k < ep.paths.size(); ++k) {
      for (int l : ep.paths[k]) cand.sol.c[ep.edge][l] += std::max(0.0, r.x[ep.vars[k]]);
    }
  }
  // Tight B: the largest flow of the task on the link.
  for (int e = 0; e < ne; ++e) {
    int t = p.edges[e].parent;
    for (int l = 0; l < nl; ++l) cand.sol.b[t][l] = std::max(cand.sol.b[t][l], cand.sol.c[e][l]);
  }
  double comm = 0.0;
  for (int t = 0; t < nt; ++t) {
    for (int l = 0; l < nl; ++l) {
      const auto& c = p.links[l].coding;
      comm += (c.encode_energy_j_per_bit + c.decode_energy_j_per_bit) * cand.sol.b[t][l];
    }
  }
  cand.objective = alpha * reward - (1.0 - alpha) * (power + comm);
  return cand;
}

}  // namespace

AllocationSolution brute_force_oracle(const ProblemInstance& p, double alpha) {
  if (p.num_robots() > kOracleMaxRobots || p.num_tasks() > kOracleMaxTasks)
    throw Error("oracle: instance too large for exhaustive enumeration");
  const int nt = p.num_tasks();
  std::vector<std::vector<int>> choices(nt);
  for (int t = 0; t < nt; ++t) {
    for (int j = 0; j < p.num_robots(); ++j) {
      if (p.allowed(t, j)) choices[t].push_back(j);
    }
    if (!p.tasks[t].required) choices[t].push_back(-1);
  }
  Candidate best;
  std::vector<int> exec(nt, -1);
  std::function<void(int)> enumerate = [&](int t) {
    if (t == nt) {
      Candidate c = evaluate(p, alpha, exec);
      if (c.feasible && (!best.feasible || c.objective > best.objective)) best = std::move(c);
      return;
    }
    for (int j : choices[t]) {
      exec[t] = j;
      enumerate(t + 1);
    }
  };
  enumerate(0);
  if (!best.feasible) {
    auto sol = empty_solution(p);
    sol.status = SolveStatus::kInfeasible;
    return sol;
  }
  best.sol.status = SolveStatus::kOptimal;
  best.sol.objective = best.objective;
  return best.sol;
}

}  // namespace pdra
