#pragma once

#include <string>
#include <vector>

#include "pdra/model/problem.hpp"
#include "pdra/model/types.hpp"

namespace fixtures {

// Hand-built allocation problems. Robots and tasks are added in id order.
class ProblemBuilder {
 public:
  explicit ProblemBuilder(double period_s = 60.0, double alpha = 0.5) {
    p_.period_s = period_s;
    p_.alpha = alpha;
  }

  int robot(const std::string& id, double cores = 1.0, bool base = false) {
    p_.robots.push_back(id);
    p_.max_cores.push_back(cores);
    p_.base_station.push_back(base);
    for (auto& row : p_.load) row.push_back(0.0);
    for (auto& row : p_.power) row.push_back(0.0);
    return static_cast<int>(p_.robots.size()) - 1;
  }

  // `cost` lists (robot, load, watts) for every robot allowed to run the task.
  struct Cost {
    int robot;
    double load;
    double watts;
  };
  int task(const std::string& id, int owner, bool required, double reward, double bits,
           const std::vector<Cost>& cost, pdra::SampleStage stage = pdra::SampleStage::kNone) {
    pdra::ProblemTask t;
    t.id = id;
    t.owner = owner;
    t.required = required;
    t.reward = reward;
    t.product_bits = bits;
    t.stage = stage;
    p_.load.emplace_back(p_.robots.size(), 0.0);
    p_.power.emplace_back(p_.robots.size(), 0.0);
    for (const auto& c : cost) {
      t.allowed.push_back(c.robot);
      p_.load.back()[c.robot] = c.load;
      p_.power.back()[c.robot] = c.watts;
    }
    p_.tasks.push_back(t);
    return static_cast<int>(p_.tasks.size()) - 1;
  }

  void child(int parent, int child, double max_latency_s = 1e30) {
    p_.tasks[parent].children.push_back(child);
    p_.tasks[parent].child_latency_s.push_back(max_latency_s);
  }

  int link(int from, int to, double bps, double latency_s = 0.0, pdra::LinkCoding coding = {}) {
    p_.links.push_back({from, to, bps, latency_s, coding});
    return static_cast<int>(p_.links.size()) - 1;
  }

  pdra::ProblemInstance build() {
    pdra::ProblemInstance p = p_;
    p.finalize();
    return p;
  }

 private:
  pdra::ProblemInstance p_;
};

}  // namespace fixtures
