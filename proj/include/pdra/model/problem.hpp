#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pdra/model/scenario.hpp"
#include "pdra/model/types.hpp"

namespace pdra {

// Live state of one robot as seen by whoever derives the problem.
struct RobotState {
  double battery = 1.0;
  Vec2 position;
  bool science_region = false;
};

struct ProblemTask {
  std::string id;
  int owner = -1;
  bool required = true;
  double reward = 0.0;
  double product_bits = 1.0;
  std::vector<int> children;
  std::vector<double> child_latency_s;  // parallel to children
  std::vector<int> allowed;             // robot indices, ascending
  int parent = -1;
  SampleStage stage = SampleStage::kNone;
};

struct ProblemLink {
  int from = -1;
  int to = -1;
  double throughput_bps = 0.0;
  double latency_s = 0.0;
  LinkCoding coding;
};

// Data-product dependency (parent task, child task).
struct TaskEdge {
  int parent = -1;
  int child = -1;
  double max_latency_s = 0.0;
};

// Index-based allocation problem: every parameter of the MILP after applying battery, science
// region and link observations. Robots and tasks are sorted by id.
struct ProblemInstance {
  double period_s = 60.0;
  double alpha = 0.5;
  std::vector<std::string> robots;
  std::vector<double> max_cores;
  std::vector<bool> base_station;
  std::vector<ProblemTask> tasks;
  std::vector<std::vector<double>> load;   // [task][robot]; 0 where not allowed
  std::vector<std::vector<double>> power;  // [task][robot]; 0 where not allowed
  std::vector<ProblemLink> links;

  // Derived by finalize().
  std::vector<TaskEdge> edges;
  std::vector<std::vector<int>> out_links;  // robot -> link indices
  std::vector<std::vector<int>> in_links;
  std::vector<std::vector<bool>> allowed_mask;  // [task][robot]

  // Rebuilds derived indices; throws Error on inconsistent data.
  void finalize();

  int robot_index(const std::string& id) const;  // -1 when absent
  int task_index(const std::string& id) const;
  int link_index(int from, int to) const;
  bool allowed(int task, int robot) const { return allowed_mask[task][robot]; }
  int num_robots() const { return static_cast<int>(robots.size()); }
  int num_tasks() const { return static_cast<int>(tasks.size()); }
  int num_links() const { return static_cast<int>(links.size()); }
};

// Default live state straight from the scenario file.
std::map<std::string, RobotState> initial_robot_states(const ScenarioSpec& spec);

bool in_science_region(const ScenarioSpec& spec, const RobotSpec& robot, const Vec2& position);

// Builds the allocation problem. Optional tasks are included only for owners currently in a
// science region. `throughput` overrides the contact-plan average per directed pair.
ProblemInstance make_problem(const ScenarioSpec& spec,
                             const std::map<std::string, RobotState>& states,
                             const std::map<LinkKey, double>* throughput = nullptr);

ProblemInstance make_problem(const ScenarioSpec& spec);

// Canonical text used to cache solutions of identical problems.
std::string fingerprint(const ProblemInstance& problem);

}  // namespace pdra
