#pragma once

#include <string>

#include "pdra/model/types.hpp"

namespace pdra::sim {

// Static layout: nine rovers around a base station, one occluding obstacle that forces a relay,
// two science regions holding four rovers.
ScenarioSpec build_ti_scenario();

// Two clusters split by a wall that blocks every direct link. The left cluster holds the base
// station; rover r05 dwells in the right cluster during [0, 25) s and in the left one during
// [30, 55) s of every 60 s period. Without the mule, r05 and its tasks are absent.
ScenarioSpec build_dtn_scenario(bool with_mule = true);

inline const std::string kMuleId = "r05";

// "left" or "right" for the DTN layout, by which side of the wall the robot's static position
// lies; the mule reports "mule".
std::string dtn_cluster(const ScenarioSpec& spec, const std::string& robot_id);

// Position at time t: the dwell point covering t, the straight line between consecutive dwell
// points while travelling, or the static position.
Vec2 position_at(const RobotSpec& robot, double period_s, double t);

}  // namespace pdra::sim
