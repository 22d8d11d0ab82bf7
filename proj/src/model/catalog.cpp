#include "pdra/model/catalog.hpp"

namespace pdra {

const std::vector<TaskProfile>& housekeeping_chain() {
  static const std::vector<TaskProfile> chain = {
      {"sense", true, true, 0.0, 100e3, SampleStage::kNone, 0.05, 0.5, 0.05, 0.5, 20.0},
      {"localize", true, false, 0.0, 8e3, SampleStage::kNone, 0.15, 3.0, 0.05, 0.6, 20.0},
      {"plan", true, false, 0.0, 8e3, SampleStage::kNone, 0.15, 3.0, 0.05, 0.6, 20.0},
      {"drive", true, true, 0.0, 1e3, SampleStage::kNone, 0.05, 0.5, 0.05, 0.5, 0.0},
  };
  return chain;
}

const std::vector<TaskProfile>& science_chain() {
  static const std::vector<TaskProfile> chain = {
      {"take_sample", false, true, 2.0, 200e3, SampleStage::kTake, 0.05, 0.5, 0.05, 0.5, 40.0},
      {"analyze", false, false, 3.0, 50e3, SampleStage::kAnalyze, 0.25, 4.0, 0.08, 0.8, 40.0},
      {"store", false, false, 5.0, 1e3, SampleStage::kStore, 0.05, 1.5, 0.02, 0.3, 0.0},
  };
  return chain;
}

const TaskProfile* find_profile(const std::string& name) {
  for (const auto* chain : {&housekeeping_chain(), &science_chain()}) {
    for (const auto& p : *chain) {
      if (p.name == name) return &p;
    }
  }
  return nullptr;
}

std::string task_name(const std::string& task_id) {
  auto slash = task_id.find('/');
  return slash == std::string::npos ? task_id : task_id.substr(slash + 1);
}

std::string task_owner(const std::string& task_id) {
  auto slash = task_id.find('/');
  return slash == std::string::npos ? std::string() : task_id.substr(0, slash);
}

void add_chain(ScenarioSpec& spec, const std::string& owner,
               const std::vector<TaskProfile>& chain) {
  for (size_t k = 0; k < chain.size(); ++k) {
    const auto& p = chain[k];
    TaskSpec t;
    t.task_id = owner + "/" + p.name;
    t.owner_robot = owner;
    t.required = p.required;
    t.reward = p.reward;
    t.product_size_bits = p.product_bits;
    t.sample_stage = p.stage;
    if (k + 1 < chain.size()) {
      std::string child = owner + "/" + chain[k + 1].name;
      t.children.push_back(child);
      t.max_latency_s[child] = p.child_latency_s;
    }
    if (p.pinned) {
      t.allowed_robots = {owner};
    } else {
      for (const auto& r : spec.robots) t.allowed_robots.push_back(r.robot_id);
    }
    spec.tasks.push_back(std::move(t));
  }
}

void assign_profiles(ScenarioSpec& spec) {
  for (const auto& t : spec.tasks) {
    const TaskProfile* p = find_profile(task_name(t.task_id));
    if (!p) throw Error("task " + t.task_id + ": no catalog profile");
    for (const auto& id : t.allowed_robots) {
      RobotSpec* r = spec.find_robot(id);
      if (!r) continue;
      r->compute_load[t.task_id] = r->base_station ? p->base_load : p->rover_load;
      r->power[t.task_id] = r->base_station ? p->base_power_w : p->rover_power_w;
    }
  }
}

CommModel default_comm_model() {
  CommModel m;
  m.tiers = {{20.0, 250e3}, {40.0, 54e3}, {60.0, 11e3}};
  m.latency_s = 0.01;
  return m;
}

LinkCoding default_link_coding() {
  LinkCoding c;
  c.encode_load_per_bps = 1e-6;
  c.decode_load_per_bps = 1e-6;
  c.encode_energy_j_per_bit = 2e-6;
  c.decode_energy_j_per_bit = 1e-6;
  return c;
}

}  // namespace pdra
