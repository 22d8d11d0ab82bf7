#include "pdra/model/problem.hpp"

#include <algorithm>
#include <sstream>

namespace pdra {

void ProblemInstance::finalize() {
  const int n = num_robots();
  const int nt = num_tasks();
  if (static_cast<int>(max_cores.size()) != n) throw Error("max_cores size mismatch");
  if (base_station.size() != robots.size()) base_station.assign(n, false);
  if (static_cast<int>(load.size()) != nt || static_cast<int>(power.size()) != nt)
    throw Error("load/power table size mismatch");

  allowed_mask.assign(nt, std::vector<bool>(n, false));
  edges.clear();
  for (int t = 0; t < nt; ++t) {
    auto& task = tasks[t];
    std::sort(task.allowed.begin(), task.allowed.end());
    for (int r : task.allowed) {
      if (r < 0 || r >= n) throw Error("task " + task.id + " allowed robot out of range");
      allowed_mask[t][r] = true;
    }
    if (task.child_latency_s.size() != task.children.size())
      throw Error("task " + task.id + " latency bounds do not match children");
    task.parent = -1;
  }
  for (int t = 0; t < nt; ++t) {
    for (size_t k = 0; k < tasks[t].children.size(); ++k) {
      int c = tasks[t].children[k];
      if (c < 0 || c >= nt) throw Error("task " + tasks[t].id + " child out of range");
      tasks[c].parent = t;
      edges.push_back({t, c, tasks[t].child_latency_s[k]});
    }
  }
  out_links.assign(n, {});
  in_links.assign(n, {});
  for (int l = 0; l < num_links(); ++l) {
    const auto& link = links[l];
    if (link.from < 0 || link.from >= n || link.to < 0 || link.to >= n || link.from == link.to)
      throw Error("link endpoint out of range");
    if (!(link.throughput_bps > 0)) throw Error("link with nonpositive throughput");
    out_links[link.from].push_back(l);
    in_links[link.to].push_back(l);
  }
}

int ProblemInstance::robot_index(const std::string& id) const {
  auto it = std::find(robots.begin(), robots.end(), id);
  return it == robots.end() ? -1 : static_cast<int>(it - robots.begin());
}

int ProblemInstance::task_index(const std::string& id) const {
  for (int t = 0; t < num_tasks(); ++t) {
    if (tasks[t].id == id) return t;
  }
  return -1;
}

int ProblemInstance::link_index(int from, int to) const {
  for (int l : out_links[from]) {
    if (links[l].to == to) return l;
  }
  return -1;
}

bool in_science_region(const ScenarioSpec& spec, const RobotSpec& robot, const Vec2& position) {
  if (!robot.science_capable) return false;
  if (spec.science_regions.empty()) return true;
  return std::any_of(spec.science_regions.begin(), spec.science_regions.end(),
                     [&](const Polygon& p) { return point_in_polygon(position, p); });
}

std::map<std::string, RobotState> initial_robot_states(const ScenarioSpec& spec) {
  std::map<std::string, RobotState> states;
  for (const auto& r : spec.robots) {
    states[r.robot_id] = {r.battery, r.position, in_science_region(spec, r, r.position)};
  }
  return states;
}

ProblemInstance make_problem(const ScenarioSpec& spec) {
  return make_problem(spec, initial_robot_states(spec));
}

ProblemInstance make_problem(const ScenarioSpec& spec,
                             const std::map<std::string, RobotState>& states,
                             const std::map<LinkKey, double>* throughput) {
  ProblemInstance p;
  p.period_s = spec.planning_period_s;
  p.alpha = spec.alpha;

  std::vector<const RobotSpec*> robots;
  for (const auto& r : spec.robots) robots.push_back(&r);
  std::sort(robots.begin(), robots.end(),
            [](const RobotSpec* a, const RobotSpec* b) { return a->robot_id < b->robot_id; });
  std::vector<double> multiplier;
  std::vector<bool> science;
  for (const RobotSpec* r : robots) {
    p.robots.push_back(r->robot_id);
    p.max_cores.push_back(r->max_compute_cores);
    p.base_station.push_back(r->base_station);
    auto it = states.find(r->robot_id);
    RobotState st = it != states.end() ? it->second
                                       : RobotState{r->battery, r->position, false};
    multiplier.push_back(battery_multiplier(st.battery, spec.battery_kappa));
    science.push_back(st.science_region);
  }

  std::vector<const TaskSpec*> tasks;
  for (const auto& t : spec.tasks) {
    int owner = p.robot_index(t.owner_robot);
    if (owner < 0) throw Error("task " + t.task_id + " has unknown owner");
    if (t.required || science[owner]) tasks.push_back(&t);
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const TaskSpec* a, const TaskSpec* b) { return a->task_id < b->task_id; });
  auto included = [&](const std::string& id) {
    return std::any_of(tasks.begin(), tasks.end(),
                       [&](const TaskSpec* t) { return t->task_id == id; });
  };

  for (const TaskSpec* t : tasks) {
    ProblemTask pt;
    pt.id = t->task_id;
    pt.owner = p.robot_index(t->owner_robot);
    pt.required = t->required;
    pt.reward = t->reward;
    pt.product_bits = t->product_size_bits;
    pt.stage = t->sample_stage;
    std::vector<double> load(p.num_robots(), 0.0), power(p.num_robots(), 0.0);
    for (const auto& rid : t->allowed_robots) {
      int r = p.robot_index(rid);
      if (r < 0) throw Error("task " + t->task_id + " allows unknown robot " + rid);
      const RobotSpec* robot = robots[r];
      auto c = robot->compute_load.find(t->task_id);
      auto w = robot->power.find(t->task_id);
      if (c == robot->compute_load.end() || w == robot->power.end())
        throw Error("robot " + rid + " lacks parameters for " + t->task_id);
      pt.allowed.push_back(r);
      load[r] = c->second * multiplier[r];
      power[r] = w->second * multiplier[r];
    }
    p.tasks.push_back(std::move(pt));
    p.load.push_back(std::move(load));
    p.power.push_back(std::move(power));
  }
  for (size_t i = 0; i < tasks.size(); ++i) {
    for (const auto& child : tasks[i]->children) {
      if (!included(child)) continue;
      p.tasks[i].children.push_back(p.task_index(child));
      auto lat = tasks[i]->max_latency_s.find(child);
      p.tasks[i].child_latency_s.push_back(lat == tasks[i]->max_latency_s.end()
                                                ? 1e30
                                                : lat->second);
    }
  }

  auto averaged = throughput ? *throughput
                             : average_link_throughput(spec.contact_plan, spec.planning_period_s);
  std::map<LinkKey, double> latency;
  for (const auto& w : spec.contact_plan.windows) {
    auto& l = latency[{w.from, w.to}];
    l = std::max(l, w.latency_s);
  }
  for (const auto& [key, bps] : averaged) {
    int from = p.robot_index(key.first);
    int to = p.robot_index(key.second);
    if (from < 0 || to < 0 || from == to || !(bps > 0)) continue;
    auto lat = latency.find(key);
    p.links.push_back({from, to, bps,
                       lat != latency.end() ? lat->second : spec.comm_model.latency_s,
                       spec.coding_for(key.first, key.second)});
  }
  std::sort(p.links.begin(), p.links.end(), [](const ProblemLink& a, const ProblemLink& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  p.finalize();
  return p;
}

std::string fingerprint(const ProblemInstance& p) {
  std::ostringstream os;
  os.precision(17);
  os << p.period_s << ';' << p.alpha << ';';
  for (int r = 0; r < p.num_robots(); ++r) os << p.robots[r] << ',' << p.max_cores[r] << ';';
  for (int t = 0; t < p.num_tasks(); ++t) {
    const auto& task = p.tasks[t];
    os << task.id << ',' << task.owner << ',' << task.required << ',' << task.reward << ','
       << task.product_bits;
    for (size_t k = 0; k < task.children.size(); ++k)
      os << ",c" << task.children[k] << '@' << task.child_latency_s[k];
    for (int r : task.allowed) os << ",a" << r << ':' << p.load[t][r] << ':' << p.power[t][r];
    os << ';';
  }
  for (const auto& l : p.links) {
    os << l.from << '>' << l.to << ',' << l.throughput_bps << ',' << l.latency_s << ','
       << l.coding.encode_load_per_bps << ',' << l.coding.decode_load_per_bps << ','
       << l.coding.encode_energy_j_per_bit << ',' << l.coding.decode_energy_j_per_bit << ';';
  }
  return os.str();
}

}  // namespace pdra
