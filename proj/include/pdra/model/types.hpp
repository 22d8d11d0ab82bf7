#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdra {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr int kDispatchableSchemaVersion = 1;
inline constexpr int kStatusSchemaVersion = 1;

// Domain errors (bad input, infeasible request). Usage errors are handled by the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

struct Polygon {
  std::vector<Vec2> vertices;
  bool operator==(const Polygon&) const = default;
};

// Science chain stage of a task; drives sample counting and the naive baseline's storage rule.
enum class SampleStage { kNone, kTake, kAnalyze, kStore };

struct TaskSpec {
  std::string task_id;  // "robot_id/task_name"
  std::string owner_robot;
  bool required = true;
  double reward = 0.0;
  double product_size_bits = 1.0;
  std::vector<std::string> children;
  std::map<std::string, double> max_latency_s;  // child id -> seconds
  std::vector<std::string> allowed_robots;
  SampleStage sample_stage = SampleStage::kNone;
  bool operator==(const TaskSpec&) const = default;
};

// A dwell point of a scripted robot, repeating every contact-plan period.
struct Waypoint {
  double start_s = 0.0;
  double end_s = 0.0;
  Vec2 position;
  bool operator==(const Waypoint&) const = default;
};

struct RobotSpec {
  std::string robot_id;
  Vec2 position;
  double battery = 1.0;
  double max_compute_cores = 1.0;
  std::map<std::string, double> compute_load;  // task id -> core fraction
  std::map<std::string, double> power;         // task id -> watts
  bool science_capable = false;
  bool base_station = false;
  std::vector<Waypoint> waypoints;  // empty for static robots
  bool operator==(const RobotSpec&) const = default;
};

struct LinkCoding {
  double encode_load_per_bps = 0.0;
  double decode_load_per_bps = 0.0;
  double encode_energy_j_per_bit = 0.0;
  double decode_energy_j_per_bit = 0.0;
  bool operator==(const LinkCoding&) const = default;
};

// One directed entry of the link set used by the allocator.
struct LinkParams {
  std::string from;
  std::string to;
  double throughput_bps = 0.0;
  double latency_s = 0.0;
  LinkCoding coding;
  bool operator==(const LinkParams&) const = default;
};

struct ContactWindow {
  std::string from;
  std::string to;
  double start_s = 0.0;
  double end_s = 0.0;
  double throughput_bps = 0.0;
  double latency_s = 0.0;
  bool operator==(const ContactWindow&) const = default;
};

struct ContactPlan {
  double period_s = 1.0;
  std::vector<ContactWindow> windows;
  bool operator==(const ContactPlan&) const = default;
};

struct CommTier {
  double max_distance_m = 0.0;
  double throughput_bps = 0.0;
  bool operator==(const CommTier&) const = default;
};

struct CommModel {
  std::vector<CommTier> tiers;  // sorted by max_distance_m
  double latency_s = 0.0;
  bool operator==(const CommModel&) const = default;
};

struct Arena {
  Vec2 min{0.0, 0.0};
  Vec2 max{100.0, 100.0};
  bool operator==(const Arena&) const = default;
};

struct CodingOverride {
  std::string from;
  std::string to;
  LinkCoding coding;
  bool operator==(const CodingOverride&) const = default;
};

struct ScenarioSpec {
  std::string name;
  std::vector<RobotSpec> robots;
  std::vector<TaskSpec> tasks;
  ContactPlan contact_plan;
  double planning_period_s = 60.0;
  double alpha = 0.5;
  std::vector<Polygon> obstacles;
  std::vector<Polygon> science_regions;  // empty: science_capable alone decides
  CommModel comm_model;
  LinkCoding link_coding;  // default for every link
  std::vector<CodingOverride> coding_overrides;
  Arena arena;
  double battery_kappa = 1.0;

  const RobotSpec* find_robot(const std::string& id) const;
  RobotSpec* find_robot(const std::string& id);
  const TaskSpec* find_task(const std::string& id) const;
  LinkCoding coding_for(const std::string& from, const std::string& to) const;
  bool operator==(const ScenarioSpec&) const = default;
};

enum class DispatchableKind { kObligation, kResult };

struct Dispatchable {
  DispatchableKind kind = DispatchableKind::kObligation;
  std::string id;
  std::string requester;
  std::string task_id;
  double payload_bits = 0.0;
  double created_at_s = 0.0;
  double ttl_s = 1.0;
  std::vector<std::string> chained;
  bool success = false;
  std::string producer;

  double expires_at() const { return created_at_s + ttl_s; }
  bool expired(double now) const { return expires_at() < now; }
  bool is_obligation() const { return kind == DispatchableKind::kObligation; }
  bool operator==(const Dispatchable&) const = default;
};

// Root of a chained id: "r1:7/2" -> "r1:7".
std::string root_dispatch_id(const std::string& id);

inline const std::string kSkip = "SKIP";

struct AllocationTable {
  std::map<std::string, std::string> assignment;  // task id -> robot id or kSkip
  long version = 0;

  // nullopt when the task is unknown to the table.
  std::optional<std::string> lookup(const std::string& task_id) const;
  bool operator==(const AllocationTable&) const = default;
};

}  // namespace pdra
