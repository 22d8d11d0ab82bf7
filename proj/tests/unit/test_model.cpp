#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "pdra/model/catalog.hpp"
#include "pdra/model/json.hpp"
#include "pdra/model/problem.hpp"
#include "pdra/model/scenario.hpp"
#include "pdra/sim/scenarios.hpp"

using namespace pdra;

namespace {

ScenarioSpec two_robot_scenario() {
  ScenarioSpec s;
  s.name = "pair";
  RobotSpec a;
  a.robot_id = "a";
  a.position = {10, 10};
  a.compute_load["a/t"] = 0.2;
  a.power["a/t"] = 1.0;
  RobotSpec b = a;
  b.robot_id = "b";
  b.position = {20, 10};
  s.robots = {a, b};
  TaskSpec t;
  t.task_id = "a/t";
  t.owner_robot = "a";
  t.allowed_robots = {"a", "b"};
  s.tasks = {t};
  s.contact_plan.period_s = 60;
  s.contact_plan.windows = {{"a", "b", 0, 60, 1000, 0.01}, {"b", "a", 0, 60, 1000, 0.01}};
  return s;
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Scenario, WellFormedScenarioHasNoViolations) {
  EXPECT_TRUE(validate_scenario(two_robot_scenario()).empty());
  EXPECT_TRUE(validate_scenario(sim::build_ti_scenario()).empty());
  EXPECT_TRUE(validate_scenario(sim::build_dtn_scenario(true)).empty());
}

TEST(Scenario, ChildCycleIsNotAForest) {
  auto s = two_robot_scenario();
  TaskSpec u = s.tasks[0];
  u.task_id = "a/u";
  s.robots[0].compute_load["a/u"] = 0.1;
  s.robots[0].power["a/u"] = 0.1;
  s.robots[1].compute_load["a/u"] = 0.1;
  s.robots[1].power["a/u"] = 0.1;
  s.tasks[0].children = {"a/u"};
  u.children = {"a/t"};
  s.tasks.push_back(u);
  EXPECT_TRUE(contains(validate_scenario(s), "software network not a forest"));
}

TEST(Scenario, RequiredTaskWithoutRobots) {
  auto s = two_robot_scenario();
  s.tasks[0].allowed_robots.clear();
  EXPECT_TRUE(contains(validate_scenario(s), "unallocatable required task"));
}

TEST(Scenario, JsonRoundTripIsIdentity) {
  for (const auto& spec : {sim::build_ti_scenario(), sim::build_dtn_scenario(true),
                           two_robot_scenario()}) {
    EXPECT_EQ(scenario_from_json(scenario_to_json(spec)), spec);
    const auto path = std::filesystem::temp_directory_path() / ("pdra_rt_" + spec.name + ".json");
    save_scenario(spec, path.string());
    EXPECT_EQ(load_scenario(path.string()), spec);
    std::filesystem::remove(path);
  }
}

TEST(Scenario, MissingSchemaIsRejected) {
  Json doc = scenario_to_json(two_robot_scenario());
  doc.erase("schema");
  EXPECT_THROW(scenario_from_json(doc), Error);
}

TEST(LinkAverage, AlwaysOnLink) {
  ContactPlan plan{60, {{"a", "b", 0, 60, 1000, 0}}};
  auto avg = average_link_throughput(plan, 60);
  EXPECT_DOUBLE_EQ(avg.at({"a", "b"}), 1000.0);
}

TEST(LinkAverage, PartialWindow) {
  ContactPlan plan{60, {{"a", "b", 0, 10, 600, 0}}};
  EXPECT_DOUBLE_EQ(average_link_throughput(plan, 60).at({"a", "b"}), 100.0);
}

TEST(LinkAverage, PairWithoutWindowsIsAbsent) {
  ContactPlan plan{60, {{"a", "b", 0, 10, 600, 0}}};
  auto avg = average_link_throughput(plan, 60);
  EXPECT_EQ(avg.count({"b", "a"}), 0u);
  EXPECT_EQ(avg.size(), 1u);
}

TEST(Bandwidth, DistanceTiers) {
  CommModel m;
  m.tiers = {{30, 250e3}};
  EXPECT_EQ(tier_throughput(m, 10), 250e3);
  EXPECT_EQ(tier_throughput(m, 50), 0.0);
}

TEST(Bandwidth, ObstacleBlocksLink) {
  auto s = two_robot_scenario();
  s.comm_model.tiers = {{30, 250e3}};
  auto open = compute_bandwidth_from_positions(s);
  EXPECT_EQ(average_link_throughput(open, 60).at({"a", "b"}), 250e3);
  s.obstacles = {Polygon{{{14, 0}, {16, 0}, {16, 20}, {14, 20}}}};
  auto blocked = compute_bandwidth_from_positions(s);
  EXPECT_TRUE(average_link_throughput(blocked, 60).empty());
}

TEST(Bandwidth, DtnClustersNeverConnectDirectly) {
  auto s = sim::build_dtn_scenario(true);
  for (const auto& w : s.contact_plan.windows) {
    const auto a = sim::dtn_cluster(s, w.from), b = sim::dtn_cluster(s, w.to);
    if (a == "mule" || b == "mule") continue;
    EXPECT_EQ(a, b) << w.from << "->" << w.to;
  }
  EXPECT_TRUE(is_positive_integer_multiple(s.planning_period_s, s.contact_plan.period_s));
}

TEST(Bandwidth, TiPlanIsAlwaysOn) {
  auto s = sim::build_ti_scenario();
  for (const auto& w : s.contact_plan.windows) {
    EXPECT_EQ(w.start_s, 0.0);
    EXPECT_EQ(w.end_s, s.contact_plan.period_s);
  }
}

TEST(Problem, BatteryMultiplierScalesLoadAndPower) {
  auto s = two_robot_scenario();
  s.battery_kappa = 1.0;
  auto states = initial_robot_states(s);
  states["b"].battery = 0.2;
  auto p = make_problem(s, states);
  const int t = p.task_index("a/t"), a = p.robot_index("a"), b = p.robot_index("b");
  EXPECT_DOUBLE_EQ(p.load[t][a], 0.2);
  EXPECT_DOUBLE_EQ(p.load[t][b], 0.2 * 1.8);
  EXPECT_DOUBLE_EQ(p.power[t][b], 1.8);
}

TEST(Problem, ScienceRegionGatesOptionalTasks) {
  auto s = sim::build_ti_scenario();
  auto states = initial_robot_states(s);
  for (auto& [id, st] : states) st.science_region = false;
  auto p = make_problem(s, states);
  EXPECT_EQ(p.task_index("r01/take_sample"), -1);
  states["r01"].science_region = true;
  p = make_problem(s, states);
  EXPECT_GE(p.task_index("r01/take_sample"), 0);
}

TEST(Catalog, TaskNames) {
  EXPECT_EQ(task_name("r3/plan"), "plan");
  EXPECT_EQ(task_owner("r3/plan"), "r3");
  EXPECT_NE(find_profile("analyze"), nullptr);
  EXPECT_EQ(find_profile("nope"), nullptr);
}
