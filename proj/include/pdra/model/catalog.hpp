#pragma once

#include <string>
#include <vector>

#include "pdra/model/types.hpp"

// The two-chain software network every bundled and generated scenario uses: a required
// housekeeping chain and an optional science chain.
namespace pdra {

struct TaskProfile {
  std::string name;
  bool required = true;
  bool pinned = false;  // runs only on its owner
  double reward = 0.0;
  double product_bits = 1.0;
  SampleStage stage = SampleStage::kNone;
  double rover_load = 0.0;
  double rover_power_w = 0.0;
  double base_load = 0.0;
  double base_power_w = 0.0;
  double child_latency_s = 0.0;  // bound towards the next task in the chain
};

const std::vector<TaskProfile>& housekeeping_chain();
const std::vector<TaskProfile>& science_chain();

// nullptr for names outside both chains.
const TaskProfile* find_profile(const std::string& task_name);

// "r3/plan" -> "plan"
std::string task_name(const std::string& task_id);
std::string task_owner(const std::string& task_id);

// Appends `owner`'s instance of a chain. Relocatable tasks may run on any robot present in
// `spec.robots` at call time, so add robots first.
void add_chain(ScenarioSpec& spec, const std::string& owner,
               const std::vector<TaskProfile>& chain);

// Sets compute_load and power on every robot for every task it may run, using the base or
// rover figures of the task's profile.
void assign_profiles(ScenarioSpec& spec);

// Default radio: distance tiers, per-bit coding cost, fixed light-speed latency.
CommModel default_comm_model();
LinkCoding default_link_coding();

}  // namespace pdra
