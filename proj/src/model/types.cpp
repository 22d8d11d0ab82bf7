#include "pdra/model/types.hpp"

#include <algorithm>

namespace pdra {

const RobotSpec* ScenarioSpec::find_robot(const std::string& id) const {
  auto it = std::find_if(robots.begin(), robots.end(),
                         [&](const RobotSpec& r) { return r.robot_id == id; });
  return it == robots.end() ? nullptr : &*it;
}

RobotSpec* ScenarioSpec::find_robot(const std::string& id) {
  auto it = std::find_if(robots.begin(), robots.end(),
                         [&](const RobotSpec& r) { return r.robot_id == id; });
  return it == robots.end() ? nullptr : &*it;
}

const TaskSpec* ScenarioSpec::find_task(const std::string& id) const {
  auto it = std::find_if(tasks.begin(), tasks.end(),
                         [&](const TaskSpec& t) { return t.task_id == id; });
  return it == tasks.end() ? nullptr : &*it;
}

LinkCoding ScenarioSpec::coding_for(const std::string& from, const std::string& to) const {
  for (const auto& o : coding_overrides) {
    if (o.from == from && o.to == to) return o.coding;
  }
  return link_coding;
}

std::string root_dispatch_id(const std::string& id) {
  auto slash = id.find('/');
  return slash == std::string::npos ? id : id.substr(0, slash);
}

std::optional<std::string> AllocationTable::lookup(const std::string& task_id) const {
  auto it = assignment.find(task_id);
  if (it == assignment.end()) return std::nullopt;
  return it->second;
}

}  // namespace pdra
