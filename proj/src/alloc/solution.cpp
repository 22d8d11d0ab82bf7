#include "pdra/alloc/solution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdra {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeout: return "timeout";
  }
  return "unknown";
}

int AllocationSolution::executor(int task) const {
  const auto& row = x[task];
  for (size_t j = 0; j < row.size(); ++j) {
    if (row[j] > 0.5) return static_cast<int>(j);
  }
  return -1;
}

AllocationSolution empty_solution(const ProblemInstance& p) {
  AllocationSolution s;
  s.x.assign(p.num_tasks(), std::vector<double>(p.num_robots(), 0.0));
  s.c.assign(p.edges.size(), std::vector<double>(p.num_links(), 0.0));
  s.b.assign(p.num_tasks(), std::vector<double>(p.num_links(), 0.0));
  return s;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

bool exceeds(double lhs, double rhs) {
  return lhs - rhs > kValidationTolerance * std::max(1.0, std::abs(rhs));
}

std::string link_name(const ProblemInstance& p, int l) {
  return p.robots[p.links[l].from] + "->" + p.robots[p.links[l].to];
}

}  // namespace

std::vector<std::string> validate_solution(const AllocationSolution& sol,
                                           const ProblemInstance& p) {
  std::vector<std::string> out;
  const int nr = p.num_robots(), nt = p.num_tasks(), nl = p.num_links();
  const int ne = static_cast<int>(p.edges.size());
  if (static_cast<int>(sol.x.size()) != nt || static_cast<int>(sol.c.size()) != ne ||
      static_cast<int>(sol.b.size()) != nt) {
    out.push_back("shape: value maps do not match the problem");
    return out;
  }
  const double T = p.period_s;
  const double tol = kValidationTolerance;

  for (int t = 0; t < nt; ++t) {
    double sum = 0.0;
    for (int j = 0; j < nr; ++j) {
      double v = sol.x[t][j];
      if (std::abs(v) > tol && std::abs(v - 1.0) > tol)
        out.push_back("binary: X(" + p.robots[j] + ", " + p.tasks[t].id + ") = " + fmt(v));
      if (v > tol && !p.allowed(t, j))
        out.push_back("allowed: task " + p.tasks[t].id + " on " + p.robots[j]);
      sum += v;
    }
    if (p.tasks[t].required && std::abs(sum - 1.0) > tol)
      out.push_back("required_once: task " + p.tasks[t].id + " assigned " + fmt(sum) + " times");
    if (!p.tasks[t].required && exceeds(sum, 1.0))
      out.push_back("optional_at_most_once: task " + p.tasks[t].id + " assigned " + fmt(sum) + " times");
  }

  for (int e = 0; e < ne; ++e) {
    for (int l = 0; l < nl; ++l) {
      if (sol.c[e][l] < -tol)
        out.push_back("nonnegative: C on " + link_name(p, l) + " = " + fmt(sol.c[e][l]));
    }
  }
  for (int t = 0; t < nt; ++t) {
    for (int l = 0; l < nl; ++l) {
      if (sol.b[t][l] < -tol)
        out.push_back("nonnegative: B on " + link_name(p, l) + " = " + fmt(sol.b[t][l]));
    }
  }

  for (int e = 0; e < ne; ++e) {
    const int t = p.edges[e].parent, tau = p.edges[e].child;
    const double rate = p.tasks[t].product_bits / T;
    for (int j = 0; j < nr; ++j) {
      double supply = sol.x[t][j] * rate, demand = sol.x[tau][j] * rate;
      for (int l = 0; l < nl; ++l) {
        if (p.links[l].to == j) supply += sol.c[e][l];
        if (p.links[l].from == j) demand += sol.c[e][l];
      }
      if (exceeds(demand, supply))
        out.push_back("conservation: " + p.tasks[t].id + " -> " + p.tasks[tau].id + " at " +
                      p.robots[j] + " short by " + fmt(demand - supply) + " bit/s");
    }
    for (int l = 0; l < nl; ++l) {
      if (exceeds(sol.c[e][l], sol.b[t][l]))
        out.push_back("multiplex: B(" + link_name(p, l) + ", " + p.tasks[t].id + ") below flow to " +
                      p.tasks[tau].id);
    }
  }

  for (int j = 0; j < nr; ++j) {
    double load = 0.0;
    for (int t = 0; t < nt; ++t) load += p.load[t][j] * sol.x[t][j];
    for (int l = 0; l < nl; ++l) {
      double total_b = 0.0;
      for (int t = 0; t < nt; ++t) total_b += sol.b[t][l];
      if (p.links[l].to == j) load += p.links[l].coding.decode_load_per_bps * total_b;
      if (p.links[l].from == j) load += p.links[l].coding.encode_load_per_bps * total_b;
    }
    if (exceeds(load, p.max_cores[j]))
      out.push_back("compute: robot " + p.robots[j] + " load " + fmt(load) + " > " + fmt(p.max_cores[j]));
  }

  for (int l = 0; l < nl; ++l) {
    double total_b = 0.0;
    for (int t = 0; t < nt; ++t) total_b += sol.b[t][l];
    if (exceeds(total_b, p.links[l].throughput_bps))
      out.push_back("bandwidth: link " + link_name(p, l) + " carries " + fmt(total_b) + " > " +
                    fmt(p.links[l].throughput_bps) + " bit/s");
  }

  for (int e = 0; e < ne; ++e) {
    double lat = average_latency(sol, p, e);
    if (exceeds(lat, p.edges[e].max_latency_s))
      out.push_back("latency: " + p.tasks[p.edges[e].parent].id + " -> " + p.tasks[p.edges[e].child].id +
                    " averages " + fmt(lat) + " s > " + fmt(p.edges[e].max_latency_s) + " s");
  }
  return out;
}

double objective_value(const AllocationSolution& sol, const ProblemInstance& p, double alpha) {
  double reward = 0.0, power = 0.0;
  for (int t = 0; t < p.num_tasks(); ++t) {
    for (int j = 0; j < p.num_robots(); ++j) {
      reward += p.tasks[t].reward * sol.x[t][j];
      power += p.power[t][j] * sol.x[t][j];
    }
  }
  for (int t = 0; t < p.num_tasks(); ++t) {
    for (int l = 0; l < p.num_links(); ++l) {
      const auto& c = p.links[l].coding;
      power += (c.encode_energy_j_per_bit + c.decode_energy_j_per_bit) * sol.b[t][l];
    }
  }
  return alpha * reward - (1.0 - alpha) * power;
}

double average_latency(const AllocationSolution& sol, const ProblemInstance& p, int edge) {
  const double d = p.tasks[p.edges[edge].parent].product_bits;
  double lat = 0.0;
  for (int l = 0; l < p.num_links(); ++l) {
    const auto& link = p.links[l];
    lat += (link.latency_s + d / link.throughput_bps) * sol.c[edge][l] * p.period_s / d;
  }
  return lat;
}

AllocationTable extract_allocation_table(const AllocationSolution& sol, const ProblemInstance& p,
                                         long previous_version) {
  if (!sol.has_solution())
    throw Error(std::string("cannot extract a table from a ") + to_string(sol.status) + " solution");
  AllocationTable table;
  table.version = previous_version + 1;
  for (int t = 0; t < p.num_tasks(); ++t) {
    int j = sol.executor(t);
    table.assignment[p.tasks[t].id] = j < 0 ? kSkip : p.robots[j];
  }
  return table;
}

}  // namespace pdra
