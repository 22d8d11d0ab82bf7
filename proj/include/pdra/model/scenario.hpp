#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pdra/model/types.hpp"

namespace pdra {

using LinkKey = std::pair<std::string, std::string>;

// Empty iff every type invariant holds. Each entry reads "<entity>: <rule>".
std::vector<std::string> validate_scenario(const ScenarioSpec& spec);

// Time-averaged throughput per directed pair over a horizon of `period_s`, which must be a
// positive integer multiple of the plan period. Pairs averaging zero are omitted.
std::map<LinkKey, double> average_link_throughput(const ContactPlan& plan, double period_s);

// Distance-tier contact plan. Static pairs get one always-on window; pairs involving a robot
// with waypoints get one window per dwell interval in range.
ContactPlan compute_bandwidth_from_positions(const ScenarioSpec& spec);

// Throughput of the first tier covering `distance_m`, or 0 beyond the last tier.
double tier_throughput(const CommModel& model, double distance_m);

bool point_in_polygon(const Vec2& p, const Polygon& poly);
bool segment_intersects_polygon(const Vec2& a, const Vec2& b, const Polygon& poly);
bool line_of_sight(const Vec2& a, const Vec2& b, const std::vector<Polygon>& obstacles);

// Load/power multiplier for a battery level in [0, 1].
inline double battery_multiplier(double battery, double kappa) {
  return 1.0 + kappa * (1.0 - battery);
}

// True when `ratio` is within tolerance of a positive integer.
bool is_positive_integer_multiple(double value, double base);

}  // namespace pdra
