#include "pdra/alloc/report.hpp"

namespace pdra {
namespace {

std::string link_name(const ProblemInstance& p, int l) {
  return p.robots[p.links[l].from] + "->" + p.robots[p.links[l].to];
}

Json bound(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// Ids a row refers to; the meaning of (a, b) depends on the tag.
Json row_refs(const MilpModel& m, const RowInfo& r) {
  const auto& p = m.problem;
  auto edge = [&](int e) {
    return p.tasks[p.edges[e].parent].id + "->" + p.tasks[p.edges[e].child].id;
  };
  switch (r.tag) {
    case RowTag::kRequiredOnce:
    case RowTag::kOptionalAtMostOnce:
      return {{"task", p.tasks[r.a].id}};
    case RowTag::kConservation:
      return {{"edge", edge(r.a)}, {"robot", p.robots[r.b]}};
    case RowTag::kMultiplex:
      return {{"task", p.tasks[r.a].id}, {"link", link_name(p, r.b)}};
    case RowTag::kCompute:
      return {{"robot", p.robots[r.a]}};
    case RowTag::kBandwidth:
      return {{"link", link_name(p, r.a)}};
    case RowTag::kLatency:
      return {{"edge", edge(r.a)}};
  }
  return Json::object();
}

}  // namespace

Json solution_to_json(const AllocationSolution& sol, const ProblemInstance& p) {
  Json x = Json::object(), c = Json::object(), b = Json::object();
  for (int t = 0; t < p.num_tasks(); ++t) {
    Json row = Json::object();
    for (int j = 0; j < p.num_robots(); ++j) {
      if (p.allowed(t, j)) row[p.robots[j]] = sol.x[t][j];
    }
    x[p.tasks[t].id] = row;
    Json flows = Json::object();
    for (int l = 0; l < p.num_links(); ++l) {
      if (sol.b[t][l] > 0) flows[link_name(p, l)] = sol.b[t][l];
    }
    if (!flows.empty()) b[p.tasks[t].id] = flows;
  }
  for (size_t e = 0; e < p.edges.size(); ++e) {
    Json flows = Json::object();
    for (int l = 0; l < p.num_links(); ++l) {
      if (sol.c[e][l] > 0) flows[link_name(p, l)] = sol.c[e][l];
    }
    if (!flows.empty())
      c[p.tasks[p.edges[e].parent].id + "->" + p.tasks[p.edges[e].child].id] = flows;
  }
  Json assignment = Json::object();
  for (int t = 0; t < p.num_tasks(); ++t) {
    const int j = sol.executor(t);
    assignment[p.tasks[t].id] = j < 0 ? std::string(kSkip) : p.robots[j];
  }
  return Json{{"status", to_string(sol.status)},
              {"objective", sol.objective},
              {"gap", sol.gap},
              {"solve_time_s", sol.solve_time_s},
              {"nodes", sol.nodes},
              {"assignment", assignment},
              {"X", x},
              {"C", c},
              {"B", b}};
}

Json slack_to_json(const MilpModel& m, const std::vector<RowSlack>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j{{"tag", to_string(r.row.tag)}};
    const Json refs = row_refs(m, r.row);
    for (auto& [k, v] : refs.items()) j[k] = v;
    j["activity"] = r.activity;
    j["lower"] = bound(r.lower);
    j["upper"] = bound(r.upper);
    j["slack"] = bound(r.slack);
    out.push_back(j);
  }
  return out;
}

const char* objective_mode(double alpha) {
  if (alpha == 0.0) return "energy";
  if (alpha == 1.0) return "reward";
  return "hybrid";
}

}  // namespace pdra
