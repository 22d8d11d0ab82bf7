#include "pdra/alloc/milp.hpp"

#include <algorithm>
#include <cmath>

namespace pdra {

const char* to_string(RowTag tag) {
  switch (tag) {
    case RowTag::kRequiredOnce: return "required_once";
    case RowTag::kOptionalAtMostOnce: return "optional_at_most_once";
    case RowTag::kConservation: return "conservation";
    case RowTag::kMultiplex: return "multiplex";
    case RowTag::kCompute: return "compute";
    case RowTag::kBandwidth: return "bandwidth";
    case RowTag::kLatency: return "latency";
  }
  return "unknown";
}

int MilpModel::count_rows(RowTag tag) const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                        [&](const RowInfo& r) { return r.tag == tag; }));
}

double x_objective(const ProblemInstance& p, int t, int j) {
  return p.alpha * p.tasks[t].reward - (1.0 - p.alpha) * p.power[t][j];
}

double b_objective(const ProblemInstance& p, int l) {
  const auto& c = p.links[l].coding;
  return -(1.0 - p.alpha) * (c.encode_energy_j_per_bit + c.decode_energy_j_per_bit);
}

std::vector<std::vector<bool>> reachable_placements(const ProblemInstance& p) {
  const int nr = p.num_robots();
  std::vector<std::vector<bool>> reach(nr, std::vector<bool>(nr, false));
  for (int i = 0; i < nr; ++i) {
    std::vector<int> stack{i};
    reach[i][i] = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int l : p.out_links[u]) {
        const int v = p.links[l].to;
        if (p.links[l].throughput_bps > 0 && !reach[i][v]) {
          reach[i][v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  std::vector<std::vector<bool>> place = p.allowed_mask;
  // A child placed on j needs its parent's product, so the parent sits on a robot reaching j.
  // A required child also pins the parent to robots that reach one of the child's placements.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : p.edges) {
      if (!(p.tasks[e.parent].product_bits > 0)) continue;
      for (int j = 0; j < nr; ++j) {
        if (!place[e.child][j]) continue;
        bool fed = false;
        for (int i = 0; i < nr && !fed; ++i) fed = place[e.parent][i] && reach[i][j];
        if (!fed) place[e.child][j] = false, changed = true;
      }
      if (!p.tasks[e.child].required) continue;
      for (int i = 0; i < nr; ++i) {
        if (!place[e.parent][i]) continue;
        bool feeds = false;
        for (int j = 0; j < nr && !feeds; ++j) feeds = place[e.child][j] && reach[i][j];
        if (!feeds) place[e.parent][i] = false, changed = true;
      }
    }
  }
  return place;
}

MilpModel build_milp(const ProblemInstance& problem) {
  if (problem.num_robots() == 0) throw Error("problem: empty robot set");
  if (!(problem.period_s > 0)) throw Error("problem: planning period must be positive");

  MilpModel m;
  m.problem = problem;
  const auto& p = m.problem;
  const int nr = p.num_robots(), nt = p.num_tasks(), nl = p.num_links();
  const int ne = static_cast<int>(p.edges.size());
  const double T = p.period_s;
  auto& lp = m.lp;

  auto add_row = [&](RowTag tag, int a, int b, double lo, double hi) {
    m.rows.push_back({tag, a, b});
    return lp.add_row(lo, hi);
  };

  // Rows first; columns reference them.
  std::vector<int> assign_row(nt);
  for (int t = 0; t < nt; ++t) {
    assign_row[t] = p.tasks[t].required
                        ? add_row(RowTag::kRequiredOnce, t, -1, 1.0, 1.0)
                        : add_row(RowTag::kOptionalAtMostOnce, t, -1, -lp::kInf, 1.0);
  }
  std::vector<std::vector<int>> cons_row(ne, std::vector<int>(nr));
  for (int e = 0; e < ne; ++e) {
    for (int j = 0; j < nr; ++j) cons_row[e][j] = add_row(RowTag::kConservation, e, j, 0.0, lp::kInf);
  }
  std::vector<int> compute_row(nr);
  for (int j = 0; j < nr; ++j) compute_row[j] = add_row(RowTag::kCompute, j, -1, -lp::kInf, p.max_cores[j]);
  std::vector<int> bw_row(nl);
  for (int l = 0; l < nl; ++l) bw_row[l] = add_row(RowTag::kBandwidth, l, -1, -lp::kInf, p.links[l].throughput_bps);
  std::vector<int> lat_row(ne, -1);
  for (int e = 0; e < ne; ++e) {
    if (p.edges[e].max_latency_s < 1e29) lat_row[e] = add_row(RowTag::kLatency, e, -1, -lp::kInf, p.edges[e].max_latency_s);
  }
  // Multiplex rows for tasks with several children: [task][link][child k].
  std::vector<std::vector<std::vector<int>>> mux_row(nt);
  std::vector<std::vector<int>> edges_of(nt);
  for (int e = 0; e < ne; ++e) edges_of[p.edges[e].parent].push_back(e);
  for (int t = 0; t < nt; ++t) {
    if (edges_of[t].size() < 2) continue;
    mux_row[t].assign(nl, {});
    for (int l = 0; l < nl; ++l) {
      for (size_t k = 0; k < edges_of[t].size(); ++k)
        mux_row[t][l].push_back(add_row(RowTag::kMultiplex, t, l, 0.0, lp::kInf));
    }
  }

  // X columns.
  const auto place = reachable_placements(p);
  m.x_col.assign(nt, std::vector<int>(nr, -1));
  for (int t = 0; t < nt; ++t) {
    const double size_rate = p.tasks[t].product_bits / T;
    for (int j = 0; j < nr; ++j) {
      std::vector<std::pair<int, double>> entries{{assign_row[t], 1.0}};
      if (p.load[t][j] != 0.0) entries.push_back({compute_row[j], p.load[t][j]});
      for (int e : edges_of[t]) entries.push_back({cons_row[e][j], size_rate});
      for (int e = 0; e < ne; ++e) {
        if (p.edges[e].child == t) {
          entries.push_back({cons_row[e][j], -p.tasks[p.edges[e].parent].product_bits / T});
        }
      }
      const bool ok = p.allowed(t, j);
      m.x_col[t][j] = lp.add_col(ok ? x_objective(p, t, j) : 0.0, 0.0, ok && place[t][j] ? 1.0 : 0.0,
                                 entries);
    }
  }

  // Coding load of one bit/s of B on link l: encode at the sender, decode at the receiver.
  auto b_entries = [&](int l) {
    const auto& link = p.links[l];
    std::vector<std::pair<int, double>> entries{{bw_row[l], 1.0}};
    if (link.coding.encode_load_per_bps != 0.0) entries.push_back({compute_row[link.from], link.coding.encode_load_per_bps});
    if (link.coding.decode_load_per_bps != 0.0) entries.push_back({compute_row[link.to], link.coding.decode_load_per_bps});
    return entries;
  };

  // C columns, carrying B's terms when the parent has one child.
  m.c_col.assign(ne, std::vector<int>(nl, -1));
  m.b_col.assign(nt, std::vector<int>(nl, -1));
  for (int e = 0; e < ne; ++e) {
    const int t = p.edges[e].parent;
    const double d = p.tasks[t].product_bits;
    const bool merged = edges_of[t].size() == 1;
    const int k = static_cast<int>(std::find(edges_of[t].begin(), edges_of[t].end(), e) - edges_of[t].begin());
    for (int l = 0; l < nl; ++l) {
      const auto& link = p.links[l];
      std::vector<std::pair<int, double>> entries{{cons_row[e][link.to], 1.0}, {cons_row[e][link.from], -1.0}};
      if (lat_row[e] >= 0) entries.push_back({lat_row[e], (link.latency_s + d / link.throughput_bps) * T / d});
      double cost = 0.0;
      if (merged) {
        auto extra = b_entries(l);
        entries.insert(entries.end(), extra.begin(), extra.end());
        cost = b_objective(p, l);
      } else {
        entries.push_back({mux_row[t][l][k], -1.0});
      }
      m.c_col[e][l] = lp.add_col(cost, 0.0, lp::kInf, entries);
      if (merged) m.b_col[t][l] = m.c_col[e][l];
    }
  }
  // Separate B columns for multi-child tasks.
  for (int t = 0; t < nt; ++t) {
    if (edges_of[t].size() < 2) continue;
    for (int l = 0; l < nl; ++l) {
      auto entries = b_entries(l);
      for (int row : mux_row[t][l]) entries.push_back({row, 1.0});
      m.b_col[t][l] = lp.add_col(b_objective(p, l), 0.0, lp::kInf, entries);
    }
  }
  return m;
}

std::vector<RowSlack> slack_report(const MilpModel& m, const AllocationSolution& sol) {
  std::vector<double> x(m.lp.num_cols(), 0.0);
  for (size_t t = 0; t < m.x_col.size(); ++t)
    for (size_t j = 0; j < m.x_col[t].size(); ++j)
      if (m.x_col[t][j] >= 0) x[m.x_col[t][j]] = sol.x[t][j];
  for (size_t e = 0; e < m.c_col.size(); ++e)
    for (size_t l = 0; l < m.c_col[e].size(); ++l)
      if (m.c_col[e][l] >= 0) x[m.c_col[e][l]] = sol.c[e][l];
  for (size_t t = 0; t < m.b_col.size(); ++t) {
    if (m.problem.tasks[t].children.size() < 2) continue;  // merged with the C column
    for (size_t l = 0; l < m.b_col[t].size(); ++l)
      if (m.b_col[t][l] >= 0) x[m.b_col[t][l]] = sol.b[t][l];
  }
  std::vector<RowSlack> out;
  out.reserve(m.rows.size());
  for (int r = 0; r < m.lp.num_rows(); ++r) {
    RowSlack s;
    s.row = m.rows[r];
    s.activity = m.lp.row_activity(r, x);
    s.lower = m.lp.row_lower[r];
    s.upper = m.lp.row_upper[r];
    s.slack = std::min(std::isfinite(s.lower) ? s.activity - s.lower : lp::kInf,
                       std::isfinite(s.upper) ? s.upper - s.activity : lp::kInf);
    out.push_back(s);
  }
  return out;
}

}  // namespace pdra
