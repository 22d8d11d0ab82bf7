#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pdra/model/json.hpp"
#include "pdra/model/problem.hpp"
#include "pdra/model/scenario.hpp"

namespace pdra::world {

struct StatusMessage {
  std::string origin;
  double timestamp_s = 0.0;
  double battery = 1.0;
  Vec2 position;
  bool science_region = false;
  // Average throughput between the origin and each neighbor, bits/s. Zero reports a lost link.
  std::map<std::string, double> observed_link_throughputs;
  std::uint64_t sequence_number = 0;
  bool operator==(const StatusMessage&) const = default;
};

Json status_to_json(const StatusMessage& m);
StatusMessage status_from_json(const Json& doc);
std::string encode_status(const StatusMessage& m);
// Throws Error on malformed input.
StatusMessage decode_status(const std::string& text);

struct MergeResult {
  bool applied = false;  // (origin, sequence_number) was newer than what the view held
  bool changed = false;  // derived problem parameters differ afterwards
};

// A robot's copy of the global parameters: the scenario it was deployed with plus the latest
// status of every robot. Derived parameters are a pure function of both, so two views holding
// the same messages are identical whatever order they arrived in.
class WorldView {
 public:
  explicit WorldView(ScenarioSpec base);

  MergeResult merge_status(const StatusMessage& msg);

  const ScenarioSpec& base() const { return base_; }
  const std::map<std::string, StatusMessage>& latest() const { return latest_; }
  const std::map<std::string, RobotState>& robot_states() const { return states_; }
  // Known links only: observations refine links of the deployed contact plan and may remove
  // them, but never add new pairs.
  const std::map<LinkKey, double>& link_throughputs() const { return links_; }

  ProblemInstance problem() const;
  // Canonical text of the derived parameters.
  std::string digest() const;
  bool operator==(const WorldView& o) const { return digest() == o.digest(); }

 private:
  void derive();

  ScenarioSpec base_;
  std::map<LinkKey, double> base_links_;
  std::map<std::string, StatusMessage> latest_;
  std::map<std::string, RobotState> states_;
  std::map<LinkKey, double> links_;
};

// Relay bookkeeping of one robot: every status is handed at most once to each neighbor.
class Flooder {
 public:
  explicit Flooder(std::string self) : self_(std::move(self)) {}

  // Statuses to send now, as (neighbor, message) pairs: every latest status in `view` that this
  // robot has not yet given to a current neighbor, excluding the neighbor's own.
  std::vector<std::pair<std::string, StatusMessage>> flood_policy(
      const WorldView& view, const std::vector<std::string>& neighbors, double now);

 private:
  std::string self_;
  std::map<std::string, std::map<std::string, std::uint64_t>> sent_;  // neighbor -> origin -> seq
};

// Re-solve when the view changed since the last solve or a planning period has elapsed.
bool should_resolve(bool changed_since_last_solve, double last_solve_time, double now,
                    double period_s);

}  // namespace pdra::world
