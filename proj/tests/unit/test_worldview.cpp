#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <random>

#include "pdra/sim/scenarios.hpp"
#include "pdra/world/worldview.hpp"

using namespace pdra;
using namespace pdra::world;

namespace {

StatusMessage status(const std::string& origin, std::uint64_t seq, double battery = 1.0) {
  StatusMessage m;
  m.origin = origin;
  m.sequence_number = seq;
  m.timestamp_s = static_cast<double>(seq);
  m.battery = battery;
  return m;
}

ScenarioSpec ti() { return sim::build_ti_scenario(); }

}  // namespace

TEST(WorldView, NewerSequenceIsApplied) {
  WorldView v(ti());
  auto m = status("r01", 1, 0.3);
  m.position = v.base().find_robot("r01")->position;
  auto r = v.merge_status(m);
  EXPECT_TRUE(r.applied);
  EXPECT_TRUE(r.changed);
  EXPECT_DOUBLE_EQ(v.robot_states().at("r01").battery, 0.3);
}

TEST(WorldView, OlderSequenceIsIgnored) {
  WorldView v(ti());
  v.merge_status(status("r01", 5, 0.3));
  auto r = v.merge_status(status("r01", 4, 0.9));
  EXPECT_FALSE(r.applied);
  EXPECT_FALSE(r.changed);
  EXPECT_DOUBLE_EQ(v.robot_states().at("r01").battery, 0.3);
}

TEST(WorldView, UnknownOriginIsIgnored) {
  WorldView v(ti());
  EXPECT_FALSE(v.merge_status(status("ghost", 1)).applied);
}

TEST(WorldView, ScienceFlagAddsOptionalTasks) {
  WorldView v(ti());
  const auto& r = *v.base().find_robot("r01");
  auto m = status("r01", 1, r.battery);
  m.position = r.position;
  m.science_region = false;
  v.merge_status(m);
  EXPECT_EQ(v.problem().task_index("r01/take_sample"), -1);
  m.sequence_number = 2;
  m.science_region = true;
  EXPECT_TRUE(v.merge_status(m).changed);
  EXPECT_GE(v.problem().task_index("r01/take_sample"), 0);
}

TEST(WorldView, ZeroThroughputRemovesKnownLinkOnly) {
  WorldView v(ti());
  ASSERT_TRUE(v.link_throughputs().count({"base", "r01"}));
  auto m = status("r01", 1, 0.9);
  m.position = v.base().find_robot("r01")->position;
  m.observed_link_throughputs["base"] = 0.0;
  m.observed_link_throughputs["r08"] = 5000.0;  // not in the deployed plan
  v.merge_status(m);
  EXPECT_FALSE(v.link_throughputs().count({"base", "r01"}));
  EXPECT_FALSE(v.link_throughputs().count({"r01", "base"}));
  EXPECT_FALSE(v.link_throughputs().count({"r01", "r08"}));
}

TEST(WorldView, NewerLinkReportWinsAcrossEndpoints) {
  WorldView v(ti());
  auto a = status("r01", 1, 0.9);
  a.position = v.base().find_robot("r01")->position;
  a.timestamp_s = 10;
  a.observed_link_throughputs["base"] = 1000;
  auto b = status("base", 1);
  b.position = v.base().find_robot("base")->position;
  b.timestamp_s = 12;
  b.observed_link_throughputs["r01"] = 2000;
  v.merge_status(a);
  v.merge_status(b);
  EXPECT_EQ(v.link_throughputs().at({"r01", "base"}), 2000);
  EXPECT_EQ(v.link_throughputs().at({"base", "r01"}), 2000);
}

TEST(WorldView, MergeOrderDoesNotMatter) {
  std::vector<StatusMessage> msgs;
  const auto spec = ti();
  for (const auto& r : spec.robots) {
    for (std::uint64_t s = 1; s <= 3; ++s) {
      auto m = status(r.robot_id, s, 0.2 + 0.2 * static_cast<double>(s));
      m.position = {r.position.x + s, r.position.y};
      m.timestamp_s = static_cast<double>(s) + (r.robot_id < "r05" ? 0.5 : 0.0);
      m.science_region = s % 2 == 1;
      if (r.robot_id != "base") m.observed_link_throughputs["base"] = 1000.0 * static_cast<double>(s);
      msgs.push_back(m);
    }
  }
  WorldView reference(spec);
  for (const auto& m : msgs) reference.merge_status(m);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(msgs.begin(), msgs.end(), rng);
    WorldView v(spec);
    for (const auto& m : msgs) v.merge_status(m);
    EXPECT_EQ(v.digest(), reference.digest());
    EXPECT_TRUE(v == reference);
  }
}

TEST(WorldView, StatusCodecRoundTrip) {
  auto m = status("r03", 42, 0.5);
  m.position = {1.5, 2.25};
  m.science_region = true;
  m.observed_link_throughputs = {{"base", 54000}, {"r01", 0}};
  EXPECT_EQ(decode_status(encode_status(m)), m);
  EXPECT_THROW(decode_status("{}"), Error);
  EXPECT_THROW(decode_status("garbage"), Error);
}

TEST(Flooding, LineRelaysEndToEnd) {
  // a - b - c: c's status must reach a through b.
  const auto spec = ti();
  const std::vector<std::string> ids{"r01", "r02", "r03"};
  std::map<std::string, std::vector<std::string>> nbrs{
      {"r01", {"r02"}}, {"r02", {"r01", "r03"}}, {"r03", {"r02"}}};
  std::map<std::string, WorldView> views;
  std::map<std::string, Flooder> flooders;
  for (const auto& id : ids) {
    views.emplace(id, WorldView(spec));
    flooders.emplace(id, Flooder(id));
  }
  std::deque<std::pair<std::string, StatusMessage>> wire;
  auto emit = [&](const std::string& id) {
    for (auto& [to, m] : flooders.at(id).flood_policy(views.at(id), nbrs.at(id), 0))
      wire.emplace_back(to, m);
  };
  auto c = status("r03", 1, 0.4);
  c.position = spec.find_robot("r03")->position;
  views.at("r03").merge_status(c);
  emit("r03");
  int sends = 0;
  while (!wire.empty()) {
    auto [to, m] = wire.front();
    wire.pop_front();
    ++sends;
    if (views.at(to).merge_status(m).applied) emit(to);
  }
  EXPECT_EQ(views.at("r01").latest().at("r03").battery, 0.4);
  EXPECT_EQ(views.at("r01"), views.at("r03"));
  // r03->r02, r02->r01, and one echo r01->r02 that r02 discards.
  EXPECT_EQ(sends, 3);
}

TEST(Flooding, NoNeighborsNoSends) {
  WorldView v(ti());
  v.merge_status(status("r01", 1));
  Flooder f("r01");
  EXPECT_TRUE(f.flood_policy(v, {}, 0).empty());
}

TEST(Flooding, EachStatusSentOncePerNeighbor) {
  WorldView v(ti());
  v.merge_status(status("r01", 1));
  v.merge_status(status("r02", 1));
  Flooder f("r01");
  auto first = f.flood_policy(v, {"r03", "r02"}, 0);
  // r02 never gets its own status back.
  EXPECT_EQ(first.size(), 3u);
  EXPECT_TRUE(f.flood_policy(v, {"r03", "r02"}, 1).empty());
  v.merge_status(status("r02", 2));
  EXPECT_EQ(f.flood_policy(v, {"r03", "r02"}, 2).size(), 1u);
}

TEST(Resolve, Triggers) {
  EXPECT_FALSE(should_resolve(false, 0.0, 30.0, 60.0));
  EXPECT_TRUE(should_resolve(true, 0.0, 30.0, 60.0));
  EXPECT_TRUE(should_resolve(false, 0.0, 60.0, 60.0));
}
