#include "pdra/sim/scenarios.hpp"

#include <cmath>

#include "pdra/model/catalog.hpp"
#include "pdra/model/scenario.hpp"

namespace pdra::sim {
namespace {

constexpr double kWallX = 50.0;

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

RobotSpec rover(const std::string& id, Vec2 pos, double battery) {
  RobotSpec r;
  r.robot_id = id;
  r.position = pos;
  r.battery = battery;
  r.max_compute_cores = 1.0;
  r.science_capable = true;
  return r;
}

RobotSpec base_station(Vec2 pos) {
  RobotSpec r;
  r.robot_id = "base";
  r.position = pos;
  r.max_compute_cores = 2.0;
  r.base_station = true;
  return r;
}

void finish(ScenarioSpec& spec) {
  for (const auto& r : spec.robots) {
    if (r.base_station) continue;
    add_chain(spec, r.robot_id, housekeeping_chain());
    add_chain(spec, r.robot_id, science_chain());
  }
  assign_profiles(spec);
  spec.contact_plan = compute_bandwidth_from_positions(spec);
}

ScenarioSpec common(const std::string& name) {
  ScenarioSpec spec;
  spec.name = name;
  spec.planning_period_s = 60.0;
  spec.alpha = 0.5;
  spec.comm_model = default_comm_model();
  spec.link_coding = default_link_coding();
  spec.arena = {{0.0, 0.0}, {100.0, 100.0}};
  spec.contact_plan.period_s = 60.0;
  return spec;
}

}  // namespace

ScenarioSpec build_ti_scenario() {
  ScenarioSpec spec = common("ti");
  spec.robots = {base_station({50, 50}),       rover("r01", {35, 62}, 0.9),
                 rover("r02", {62, 68}, 0.55), rover("r03", {70, 45}, 0.8),
                 rover("r04", {40, 30}, 0.7),  rover("r05", {25, 50}, 1.0),
                 rover("r06", {78, 72}, 0.6),  rover("r07", {20, 20}, 0.5),
                 rover("r08", {82, 22}, 0.85), rover("r09", {50, 88}, 0.75)};
  // Hides r09 from the base and from r02; r09 reaches the base through r01.
  spec.obstacles = {rect(46, 74, 56, 80)};
  spec.science_regions = {rect(58, 60, 90, 80), rect(15, 15, 45, 35)};
  finish(spec);
  return spec;
}

ScenarioSpec build_dtn_scenario(bool with_mule) {
  ScenarioSpec spec = common(with_mule ? "dtn" : "dtn-no-mule");
  spec.robots = {base_station({15, 50}),       rover("r01", {20, 35}, 0.9),
                 rover("r02", {25, 62}, 0.6),  rover("r03", {10, 70}, 0.8),
                 rover("r04", {30, 45}, 0.7),  rover("r06", {80, 40}, 0.75),
                 rover("r07", {88, 55}, 0.55), rover("r08", {75, 65}, 0.65),
                 rover("r09", {90, 30}, 0.85)};
  if (with_mule) {
    RobotSpec mule = rover(kMuleId, {70, 50}, 1.0);
    mule.waypoints = {{0.0, 25.0, {70, 50}}, {30.0, 55.0, {30, 50}}};
    spec.robots.insert(spec.robots.begin() + 5, mule);
  }
  spec.obstacles = {rect(kWallX - 2, 0, kWallX + 2, 100)};
  spec.science_regions = {rect(18, 55, 35, 70), rect(70, 50, 95, 70)};
  finish(spec);
  return spec;
}

std::string dtn_cluster(const ScenarioSpec& spec, const std::string& robot_id) {
  const RobotSpec* r = spec.find_robot(robot_id);
  if (!r) throw Error("unknown robot " + robot_id);
  if (!r->waypoints.empty()) return "mule";
  return r->position.x < kWallX ? "left" : "right";
}

Vec2 position_at(const RobotSpec& robot, double period_s, double t) {
  const auto& w = robot.waypoints;
  if (w.empty()) return robot.position;
  const double phase = t - std::floor(t / period_s) * period_s;
  for (size_t k = 0; k < w.size(); ++k) {
    if (w[k].start_s <= phase && phase < w[k].end_s) return w[k].position;
    // Travelling towards the next dwell point, wrapping around the period.
    const Waypoint& next = w[(k + 1) % w.size()];
    double leave = w[k].end_s;
    double arrive = k + 1 < w.size() ? next.start_s : next.start_s + period_s;
    double p = phase < leave && k + 1 == w.size() ? phase + period_s : phase;
    if (leave <= p && p < arrive) {
      double f = (p - leave) / (arrive - leave);
      return {w[k].position.x + f * (next.position.x - w[k].position.x),
              w[k].position.y + f * (next.position.y - w[k].position.y)};
    }
  }
  return w.front().position;
}

}  // namespace pdra::sim
