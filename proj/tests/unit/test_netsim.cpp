#include <gtest/gtest.h>

#include "pdra/net/netsim.hpp"

using namespace pdra;
using namespace pdra::net;

namespace {

ContactPlan always_on(double bps = 1000, double latency = 0.1) {
  return ContactPlan{60, {{"a", "b", 0, 60, bps, latency}, {"b", "a", 0, 60, bps, latency}}};
}

// A-M up during [0,10), M-B during [30,40) every 60 s.
ContactPlan mule_plan() {
  return ContactPlan{60,
                     {{"A", "M", 0, 10, 1000, 0.01},
                      {"M", "A", 0, 10, 1000, 0.01},
                      {"M", "B", 30, 40, 1000, 0.01},
                      {"B", "M", 30, 40, 1000, 0.01}}};
}

Packet packet(const std::string& from, const std::string& to, double bits,
              PacketKind kind = PacketKind::kDispatchable) {
  Packet p;
  p.source = from;
  p.destination = to;
  p.size_bits = bits;
  p.kind = kind;
  return p;
}

std::vector<Delivery> drain(Network& n, double until) {
  std::vector<Delivery> all;
  while (n.next_event_time() <= until) {
    auto d = n.step(n.next_event_time());
    all.insert(all.end(), d.begin(), d.end());
  }
  return all;
}

}  // namespace

TEST(LinkState, HalfOpenWindows) {
  ContactPlan plan{60, {{"a", "b", 0, 10, 600, 0.2}}};
  auto in = link_state(plan, "a", "b", 5);
  ASSERT_TRUE(in);
  EXPECT_EQ(in->throughput_bps, 600);
  EXPECT_EQ(in->latency_s, 0.2);
  EXPECT_FALSE(link_state(plan, "a", "b", 10));
  EXPECT_FALSE(link_state(plan, "a", "b", 30));
  EXPECT_FALSE(link_state(plan, "b", "a", 5));
  EXPECT_TRUE(link_state(plan, "a", "b", 60));  // next period, window start
}

TEST(Route, SingleHopArrival) {
  auto r = earliest_arrival_route(always_on(), "a", "b", 3.0, 500);
  ASSERT_TRUE(r);
  ASSERT_EQ(r->hops.size(), 1u);
  EXPECT_NEAR(r->arrival_s, 3.6, 1e-12);
}

TEST(Route, StoreAndForwardOnMule) {
  auto r = earliest_arrival_route(mule_plan(), "A", "B", 5.0, 500);
  ASSERT_TRUE(r);
  ASSERT_EQ(r->hops.size(), 2u);
  EXPECT_EQ(r->hops[0].to, "M");
  EXPECT_LT(r->hops[0].arrival_s, 10.0);
  EXPECT_GE(r->hops[1].start_s, 30.0);
  EXPECT_GE(r->arrival_s, 30.0);
  EXPECT_LT(r->arrival_s, 40.0);
}

TEST(Route, DisconnectedHasNoRoute) {
  ContactPlan plan{60, {{"a", "b", 0, 60, 1000, 0}}};
  EXPECT_FALSE(earliest_arrival_route(plan, "b", "a", 0, 10));
  EXPECT_FALSE(earliest_arrival_route(plan, "a", "c", 0, 10));
}

TEST(Network, FifoServiceHalfSecondApart) {
  Network n(always_on(1000, 0.0));
  n.enqueue(packet("a", "b", 500), 0.0);
  n.enqueue(packet("a", "b", 500), 0.0);
  auto d = drain(n, 10);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(d[0].time_s, 0.5, 1e-12);
  EXPECT_NEAR(d[1].time_s - d[0].time_s, 0.5, 1e-12);
  EXPECT_LT(d[0].packet.id, d[1].packet.id);
}

TEST(Network, TransmissionThatDoesNotFitWaitsForNextWindow) {
  ContactPlan plan{60, {{"a", "b", 0, 10, 1000, 0.0}}};
  Network n(plan);
  ASSERT_NE(n.enqueue(packet("a", "b", 2000), 9.0), 0u);
  auto d = drain(n, 200);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(d[0].time_s, 62.0, 1e-9);
}

TEST(Network, ZeroSizeIsLatencyOnly) {
  Network n(always_on(1000, 0.1));
  n.enqueue(packet("a", "b", 0, PacketKind::kStatus), 2.0);
  auto d = drain(n, 10);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(d[0].time_s, 2.1, 1e-12);
}

TEST(Network, MuleCarriesPacketAcrossClusters) {
  Network n(mule_plan());
  ASSERT_NE(n.enqueue(packet("A", "B", 500), 5.0), 0u);
  auto d = drain(n, 100);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_GE(d[0].time_s, 30.0);
  EXPECT_EQ(n.counters().hops, 2);
  auto hops = n.take_hops();
  ASSERT_EQ(hops.size(), 2u);
  EXPECT_EQ(hops[0].to, "M");
  EXPECT_EQ(hops[1].from, "M");
}

TEST(Network, NoRouteIsDroppedAndCounted) {
  ContactPlan plan{60, {{"a", "b", 0, 60, 1000, 0}}};
  Network n(plan);
  EXPECT_EQ(n.enqueue(packet("b", "a", 10), 0.0), 0u);
  EXPECT_EQ(n.counters().dropped_no_route, 1);
}

TEST(Network, DirectSendNeedsLinkUp) {
  ContactPlan plan{60, {{"a", "b", 0, 10, 1000, 0}}};
  Network n(plan);
  EXPECT_EQ(n.enqueue_direct(packet("a", "b", 10), 20.0), 0u);
  EXPECT_NE(n.enqueue_direct(packet("a", "b", 10), 5.0), 0u);
}

TEST(Network, ExpiredPacketsAreSwept) {
  Network n(mule_plan());
  auto p = packet("A", "B", 500);
  p.expires_at_s = 20.0;
  n.enqueue(p, 5.0);
  n.step(15.0);
  EXPECT_EQ(n.packets_in_network(), 1u);
  EXPECT_EQ(n.max_overdue(25.0), 5.0);
  EXPECT_EQ(n.sweep_expired(25.0), 1);
  EXPECT_EQ(n.packets_in_network(), 0u);
  EXPECT_EQ(n.max_overdue(25.0), 0.0);
  EXPECT_EQ(n.counters().dropped_expired, 1);
}

TEST(Network, CertainLossDropsEveryHop) {
  Network n(always_on(), {1.0, 7});
  n.enqueue(packet("a", "b", 100), 0.0);
  EXPECT_TRUE(drain(n, 10).empty());
  EXPECT_EQ(n.counters().dropped_loss, 1);
}

TEST(Network, NewPlanReroutesWaitingPackets) {
  ContactPlan late{60, {{"a", "b", 30, 40, 1000, 0}}};
  Network n(late);
  n.enqueue(packet("a", "b", 100), 0.0);
  n.set_plan(always_on(1000, 0.0), 1.0);
  auto d = drain(n, 100);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(d[0].time_s, 1.1, 1e-9);
}

TEST(Network, EventSinkSeesSendAndDeliver) {
  Network n(always_on());
  std::vector<NetEventKind> kinds;
  n.set_event_sink([&](const NetEvent& e) { kinds.push_back(e.kind); });
  n.enqueue(packet("a", "b", 100), 0.0);
  drain(n, 10);
  ASSERT_EQ(kinds.size(), 2u);
  EXPECT_EQ(kinds[0], NetEventKind::kSend);
  EXPECT_EQ(kinds[1], NetEventKind::kDeliver);
}
