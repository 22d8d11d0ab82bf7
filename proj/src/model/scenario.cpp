#include "pdra/model/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pdra {
namespace {

bool coding_nonnegative(const LinkCoding& c) {
  return c.encode_load_per_bps >= 0 && c.decode_load_per_bps >= 0 &&
         c.encode_energy_j_per_bit >= 0 && c.decode_energy_j_per_bit >= 0;
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Vec2& p, const Vec2& q, const Vec2& r) {
  return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
         q.y <= std::max(p.y, r.y);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  double d1 = cross(q1, q2, p1);
  double d2 = cross(q1, q2, p2);
  double d3 = cross(p1, p2, q1);
  double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, p1, q2)) return true;
  if (d2 == 0 && on_segment(q1, p2, q2)) return true;
  if (d3 == 0 && on_segment(p1, q1, p2)) return true;
  if (d4 == 0 && on_segment(p1, q2, p2)) return true;
  return false;
}

double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void check_forest(const ScenarioSpec& spec, std::vector<std::string>& out) {
  std::map<std::string, int> parents;
  std::map<std::string, const TaskSpec*> by_id;
  for (const auto& t : spec.tasks) by_id[t.task_id] = &t;
  bool forest = true;
  for (const auto& t : spec.tasks) {
    for (const auto& c : t.children) {
      if (++parents[c] > 1) forest = false;
    }
  }
  // Cycle detection by iterative colouring.
  std::map<std::string, int> colour;
  for (const auto& t : spec.tasks) {
    if (colour[t.task_id] != 0 || !forest) continue;
    std::vector<std::pair<const TaskSpec*, size_t>> stack{{&t, 0}};
    colour[t.task_id] = 1;
    while (!stack.empty() && forest) {
      auto& [task, next] = stack.back();
      if (next < task->children.size()) {
        const auto& child = task->children[next++];
        auto it = by_id.find(child);
        if (it == by_id.end()) continue;
        int& c = colour[child];
        if (c == 1) {
          forest = false;
        } else if (c == 0) {
          c = 1;
          stack.emplace_back(it->second, 0);
        }
      } else {
        colour[task->task_id] = 2;
        stack.pop_back();
      }
    }
  }
  if (!forest) out.push_back("tasks: software network not a forest");
}

}  // namespace

bool is_positive_integer_multiple(double value, double base) {
  if (!(value > 0) || !(base > 0)) return false;
  double ratio = value / base;
  double k = std::round(ratio);
  return k >= 1 && std::abs(ratio - k) <= 1e-9 * std::max(1.0, ratio);
}

std::vector<std::string> validate_scenario(const ScenarioSpec& spec) {
  std::vector<std::string> out;
  if (spec.robots.empty()) out.push_back("scenario: no robots");
  if (!(spec.planning_period_s > 0)) out.push_back("scenario: planning period must be positive");
  if (!(spec.alpha >= 0 && spec.alpha <= 1)) out.push_back("scenario: alpha outside [0,1]");
  if (!(spec.battery_kappa >= 0)) out.push_back("scenario: battery_kappa must be nonnegative");
  if (!coding_nonnegative(spec.link_coding)) out.push_back("scenario: negative link coding cost");
  for (const auto& o : spec.coding_overrides) {
    if (!coding_nonnegative(o.coding))
      out.push_back("link " + o.from + "->" + o.to + ": negative link coding cost");
  }

  std::set<std::string> robot_ids;
  for (const auto& r : spec.robots) {
    if (!robot_ids.insert(r.robot_id).second)
      out.push_back("robot " + r.robot_id + ": duplicate robot id");
    if (!(r.battery >= 0 && r.battery <= 1))
      out.push_back("robot " + r.robot_id + ": battery outside [0,1]");
    if (!(r.max_compute_cores > 0))
      out.push_back("robot " + r.robot_id + ": max_compute_cores must be positive");
    for (const auto& [task, load] : r.compute_load) {
      if (!(load >= 0)) out.push_back("robot " + r.robot_id + ": negative load for " + task);
    }
    for (const auto& [task, watts] : r.power) {
      if (!(watts >= 0)) out.push_back("robot " + r.robot_id + ": negative power for " + task);
    }
    for (const auto& w : r.waypoints) {
      if (!(w.start_s >= 0 && w.start_s < w.end_s && w.end_s <= spec.contact_plan.period_s))
        out.push_back("robot " + r.robot_id + ": waypoint interval outside contact period");
    }
  }

  std::set<std::string> task_ids;
  for (const auto& t : spec.tasks) {
    const std::string who = "task " + t.task_id;
    if (!task_ids.insert(t.task_id).second) out.push_back(who + ": duplicate task id");
    if (!robot_ids.count(t.owner_robot)) out.push_back(who + ": unknown owner " + t.owner_robot);
    if (t.allowed_robots.empty()) {
      out.push_back(who + (t.required ? ": unallocatable required task" : ": empty allowed_robots"));
    }
    for (const auto& r : t.allowed_robots) {
      const RobotSpec* robot = spec.find_robot(r);
      if (!robot) {
        out.push_back(who + ": unknown allowed robot " + r);
        continue;
      }
      if (!robot->compute_load.count(t.task_id) || !robot->power.count(t.task_id))
        out.push_back(who + ": robot " + r + " lacks compute load or power");
    }
    if (!(t.reward >= 0)) out.push_back(who + ": negative reward");
    if (t.required && t.reward != 0) out.push_back(who + ": required task carries reward");
    if (!(t.product_size_bits > 0)) out.push_back(who + ": product size must be positive");
    for (const auto& c : t.children) {
      if (!spec.find_task(c)) out.push_back(who + ": unknown child " + c);
    }
    for (const auto& [child, lat] : t.max_latency_s) {
      if (std::find(t.children.begin(), t.children.end(), child) == t.children.end())
        out.push_back(who + ": latency bound for non-child " + child);
      if (!(lat > 0)) out.push_back(who + ": latency bound must be positive");
    }
  }
  check_forest(spec, out);

  const auto& plan = spec.contact_plan;
  if (!(plan.period_s > 0)) {
    out.push_back("contact plan: period must be positive");
  } else if (spec.planning_period_s > 0 &&
             !is_positive_integer_multiple(spec.planning_period_s, plan.period_s)) {
    out.push_back("contact plan: planning period is not a multiple of the contact period");
  }
  std::map<LinkKey, std::vector<std::pair<double, double>>> spans;
  for (const auto& w : plan.windows) {
    const std::string who = "window " + w.from + "->" + w.to;
    if (!robot_ids.count(w.from) || !robot_ids.count(w.to)) out.push_back(who + ": unknown robot");
    if (w.from == w.to) out.push_back(who + ": self link");
    if (!(w.start_s >= 0 && w.start_s < w.end_s && w.end_s <= plan.period_s))
      out.push_back(who + ": interval outside [0, period]");
    if (!(w.throughput_bps > 0)) out.push_back(who + ": throughput must be positive");
    if (!(w.latency_s >= 0)) out.push_back(who + ": negative latency");
    spans[{w.from, w.to}].emplace_back(w.start_s, w.end_s);
  }
  for (auto& [key, list] : spans) {
    std::sort(list.begin(), list.end());
    for (size_t i = 1; i < list.size(); ++i) {
      if (list[i].first < list[i - 1].second) {
        out.push_back("window " + key.first + "->" + key.second + ": overlapping windows");
        break;
      }
    }
  }

  const auto& tiers = spec.comm_model.tiers;
  for (size_t i = 1; i < tiers.size(); ++i) {
    if (tiers[i].max_distance_m < tiers[i - 1].max_distance_m) {
      out.push_back("comm model: tiers not sorted by distance");
      break;
    }
  }
  return out;
}

std::map<LinkKey, double> average_link_throughput(const ContactPlan& plan, double period_s) {
  if (!is_positive_integer_multiple(period_s, plan.period_s))
    throw Error("planning period is not a positive integer multiple of the contact period");
  double copies = std::round(period_s / plan.period_s);
  std::map<LinkKey, double> volume;
  for (const auto& w : plan.windows) {
    volume[{w.from, w.to}] += (w.end_s - w.start_s) * w.throughput_bps;
  }
  std::map<LinkKey, double> out;
  for (const auto& [key, bits] : volume) {
    double avg = bits * copies / period_s;
    if (avg > 0) out[key] = avg;
  }
  return out;
}

double tier_throughput(const CommModel& model, double distance_m) {
  for (const auto& tier : model.tiers) {
    if (tier.max_distance_m >= distance_m) return tier.throughput_bps;
  }
  return 0.0;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  const auto& v = poly.vertices;
  bool inside = false;
  for (size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if (((v[i].y > p.y) != (v[j].y > p.y)) &&
        (p.x < (v[j].x - v[i].x) * (p.y - v[i].y) / (v[j].y - v[i].y) + v[i].x))
      inside = !inside;
  }
  return inside;
}

bool segment_intersects_polygon(const Vec2& a, const Vec2& b, const Polygon& poly) {
  const auto& v = poly.vertices;
  if (v.size() < 3) return false;
  if (point_in_polygon(a, poly) || point_in_polygon(b, poly)) return true;
  for (size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if (segments_intersect(a, b, v[j], v[i])) return true;
  }
  return false;
}

bool line_of_sight(const Vec2& a, const Vec2& b, const std::vector<Polygon>& obstacles) {
  return std::none_of(obstacles.begin(), obstacles.end(),
                      [&](const Polygon& p) { return segment_intersects_polygon(a, b, p); });
}

ContactPlan compute_bandwidth_from_positions(const ScenarioSpec& spec) {
  ContactPlan plan;
  plan.period_s = spec.contact_plan.period_s > 0 ? spec.contact_plan.period_s
                                                 : spec.planning_period_s;
  const double latency = spec.comm_model.latency_s;

  // Dwell intervals per robot; static robots dwell for the whole period.
  auto dwell = [&](const RobotSpec& r) {
    if (r.waypoints.empty()) return std::vector<Waypoint>{{0.0, plan.period_s, r.position}};
    return r.waypoints;
  };

  for (const auto& a : spec.robots) {
    for (const auto& b : spec.robots) {
      if (a.robot_id == b.robot_id) continue;
      for (const auto& wa : dwell(a)) {
        for (const auto& wb : dwell(b)) {
          double start = std::max(wa.start_s, wb.start_s);
          double end = std::min(wa.end_s, wb.end_s);
          if (!(start < end)) continue;
          double bps = tier_throughput(spec.comm_model, distance(wa.position, wb.position));
          if (bps <= 0 || !line_of_sight(wa.position, wb.position, spec.obstacles)) continue;
          plan.windows.push_back({a.robot_id, b.robot_id, start, end, bps, latency});
        }
      }
    }
  }
  return plan;
}

}  // namespace pdra
