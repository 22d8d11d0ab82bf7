#include <gtest/gtest.h>

#include <algorithm>

#include "pdra/sim/scenarios.hpp"
#include "pdra/sim/simulation.hpp"

using namespace pdra;
using namespace pdra::sim;

namespace {

ScenarioSpec pair_scenario() {
  ScenarioSpec s;
  s.name = "pair";
  s.planning_period_s = 60;
  RobotSpec a;
  a.robot_id = "a";
  a.position = {10, 10};
  a.compute_load["a/t"] = 0.2;
  a.power["a/t"] = 1.5;
  RobotSpec b = a;
  b.robot_id = "b";
  b.position = {20, 10};
  b.compute_load.clear();
  b.power.clear();
  s.robots = {a, b};
  TaskSpec t;
  t.task_id = "a/t";
  t.owner_robot = "a";
  t.required = true;
  t.allowed_robots = {"a"};
  s.tasks = {t};
  s.contact_plan.period_s = 60;
  s.contact_plan.windows = {{"a", "b", 0, 60, 1000, 0.01}, {"b", "a", 0, 60, 1000, 0.01}};
  return s;
}

RunOptions scripted() {
  RunOptions o;
  o.duration_s = 120;
  o.autonomy = false;
  return o;
}

}  // namespace

TEST(Simulation, ComputeCostIsLoadTimesPeriod) {
  Simulation sim(pair_scenario(), scripted());
  sim.submit("a", "a/t", {});
  sim.run();
  const auto r = sim.report();
  ASSERT_EQ(r.executions.size(), 1u);
  EXPECT_NEAR(r.executions[0].cpu_s, 12.0, 1e-9);
  EXPECT_NEAR(r.executions[0].energy_j, 90.0, 1e-9);
  EXPECT_NEAR(r.executions[0].end_s - r.executions[0].start_s, 12.0, 1e-6);
  ASSERT_EQ(r.outcomes.size(), 1u);
  EXPECT_TRUE(r.outcomes[0].success);
}

TEST(Simulation, MissingResourceFails) {
  Simulation sim(pair_scenario(), scripted());
  AllocationTable t;
  t.assignment = {{"a/t", "b"}};
  sim.freeze_table("a", t);
  sim.freeze_table("b", t);
  sim.submit("a", "a/t", {});
  sim.run();
  const auto r = sim.report();
  ASSERT_EQ(r.outcomes.size(), 1u);
  EXPECT_FALSE(r.outcomes[0].success);
  EXPECT_EQ(r.outcomes[0].producer, "b");
  EXPECT_EQ(r.compute_energy_j, 0.0);
}

TEST(Simulation, EnergyBookkeepingAddsUp) {
  RunOptions o;
  o.duration_s = 180;
  const auto r = run(build_ti_scenario(), o);
  EXPECT_NEAR(r.total_energy_j, r.compute_energy_j + r.comm_energy_j, 1e-6);
  EXPECT_NEAR(r.total_cpu_s, r.compute_cpu_s + r.comm_cpu_s, 1e-6);
  double exec = 0, per_robot = 0;
  for (const auto& e : r.executions) exec += e.energy_j;
  for (const auto& [id, m] : r.robots) per_robot += m.energy_j;
  EXPECT_NEAR(exec, r.compute_energy_j, 1e-6);
  EXPECT_NEAR(per_robot, r.total_energy_j, 1e-6);
  EXPECT_GT(r.comm_energy_j, 0.0);
}

TEST(Simulation, SameSeedSameReport) {
  RunOptions o;
  o.duration_s = 120;
  o.record_trace = true;
  std::vector<std::string> t1, t2, t3;
  const auto a = run(build_ti_scenario(), o, &t1);
  const auto b = run(build_ti_scenario(), o, &t2);
  EXPECT_EQ(report_to_string(a), report_to_string(b));
  EXPECT_EQ(t1, t2);
  o.seed = 2;
  run(build_ti_scenario(), o, &t3);
  EXPECT_NE(t1, t3);
}

TEST(Simulation, StrategyNames) {
  EXPECT_EQ(strategy_from_string("selfish"), Strategy::kSelfish);
  EXPECT_STREQ(to_string(Strategy::kNaive), "naive");
  EXPECT_THROW(strategy_from_string("greedy"), Error);
}

TEST(Simulation, SupervisorInputsAreValidated) {
  Simulation sim(pair_scenario(), scripted());
  EXPECT_THROW(sim.set_battery("a", 1.5), Error);
  EXPECT_THROW(sim.set_battery("zz", 0.5), Error);
  EXPECT_THROW(sim.move_robot("zz", {0, 0}), Error);
  sim.set_battery("a", 0.5);
  EXPECT_EQ(sim.snapshot()["robots"][0]["battery"], 0.5);
}

TEST(Simulation, MoveOutOfRangeEmitsLinkUpdate) {
  auto s = pair_scenario();
  s.comm_model.tiers = {{30, 1000}};
  Simulation sim(s, scripted());
  std::vector<std::string> kinds;
  sim.set_event_sink([&](const SimEvent& e) { kinds.push_back(e.kind); });
  sim.run_until(5);
  kinds.clear();
  sim.move_robot("b", {80, 10});
  EXPECT_NE(std::find(kinds.begin(), kinds.end(), "link_update"), kinds.end());
}
