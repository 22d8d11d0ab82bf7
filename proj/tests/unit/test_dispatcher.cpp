#include <gtest/gtest.h>

#include "pdra/dispatch/dispatcher.hpp"
#include "pdra/model/json.hpp"

using namespace pdra;
using namespace pdra::dispatch;

namespace {

AllocationTable table(std::map<std::string, std::string> a) {
  AllocationTable t;
  t.assignment = std::move(a);
  t.version = 1;
  return t;
}

Dispatcher robot(const std::string& id, std::set<std::string> resources,
                 std::map<std::string, std::string> assignment) {
  Dispatcher d(id, std::move(resources), {120, 180, 8});
  d.set_table(table(std::move(assignment)));
  return d;
}

}  // namespace

TEST(Dispatcher, SuccessorIds) {
  EXPECT_EQ(successor_id("r1:7"), "r1:7/1");
  EXPECT_EQ(successor_id("r1:7/1"), "r1:7/2");
  EXPECT_EQ(root_dispatch_id("r1:7/2"), "r1:7");
}

TEST(Dispatcher, ForwarderFollowsTable) {
  auto d = robot("r1", {"t"}, {{"t", "r1"}, {"u", "base"}, {"v", kSkip}});
  Dispatchable ob;
  ob.task_id = "t";
  ob.ttl_s = 10;
  EXPECT_EQ(d.forwarder_route(ob, 0).kind, RouteKind::kExecuteLocal);
  ob.task_id = "u";
  auto send = d.forwarder_route(ob, 0);
  EXPECT_EQ(send.kind, RouteKind::kSend);
  EXPECT_EQ(send.destination, "base");
  ob.task_id = "v";
  EXPECT_EQ(d.forwarder_route(ob, 0).kind, RouteKind::kFailToAcceptor);
  ob.task_id = "unknown";
  EXPECT_EQ(d.forwarder_route(ob, 0).kind, RouteKind::kExecuteLocal);
  ob.task_id = "t";
  EXPECT_EQ(d.forwarder_route(ob, 11).kind, RouteKind::kDrop);
}

TEST(Dispatcher, SubmitCarriesChain) {
  auto d = robot("r1", {"analyze"}, {{"analyze", "base"}, {"store", "base"}});
  auto id = d.frontend_submit("analyze", {"store"}, 0.0);
  auto out = d.take_outbox();
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].destination, "base");
  EXPECT_EQ(out[0].dispatchable.id, id);
  EXPECT_EQ(out[0].dispatchable.chained, std::vector<std::string>{"store"});
  EXPECT_TRUE(out[0].dispatchable.is_obligation());
}

TEST(Dispatcher, EmptyChainIsPlainObligation) {
  auto d = robot("r1", {"t"}, {{"t", "r1"}});
  d.frontend_submit("t", {}, 0.0);
  auto jobs = d.take_backend_jobs();
  ASSERT_EQ(jobs.size(), 1u);
  EXPECT_TRUE(jobs[0].chained.empty());
}

TEST(Dispatcher, UnknownTaskIsRejected) {
  auto d = robot("r1", {"t"}, {{"t", "r1"}});
  d.set_software_network({"t"});
  EXPECT_THROW(d.frontend_submit("other", {}, 0.0), Error);
}

TEST(Dispatcher, ChainExpandsAtExecutorBeforeResultReturns) {
  auto r1 = robot("r1", {"take"}, {{"take", "r1"}, {"analyze", "base"}, {"store", "base"}});
  auto base = robot("base", {"analyze", "store"},
                    {{"take", "r1"}, {"analyze", "base"}, {"store", "base"}});
  auto id = r1.frontend_submit("analyze", {"store"}, 0.0);
  auto ob = r1.take_outbox().at(0).dispatchable;
  base.acceptor_ingest(ob, 1.0);
  auto job = base.take_backend_jobs().at(0);
  base.backend_complete(job, true, 800, 2.0);
  // Successor obligation runs locally; nothing has gone back yet.
  EXPECT_TRUE(base.take_outbox().empty());
  auto next = base.take_backend_jobs();
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(next[0].task_id, "store");
  EXPECT_EQ(next[0].id, id + "/1");
  EXPECT_EQ(next[0].payload_bits, 800);
  EXPECT_EQ(base.counters().chain_expansions, 1);
  base.backend_complete(next[0], true, 10, 3.0);
  auto back = base.take_outbox();
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].destination, "r1");
  r1.acceptor_ingest(back[0].dispatchable, 4.0);
  auto outcomes = r1.take_outcomes();
  ASSERT_EQ(outcomes.size(), 1u);
  EXPECT_EQ(outcomes[0].id, id);
  EXPECT_TRUE(outcomes[0].success);
  EXPECT_EQ(outcomes[0].producer, "base");
  EXPECT_EQ(r1.pending_count(), 0u);
}

TEST(Dispatcher, MisroutedObligationIsForwardedOn) {
  auto r2 = robot("r2", {}, {{"t", "base"}});
  Dispatchable ob;
  ob.id = "r1:1";
  ob.requester = "r1";
  ob.task_id = "t";
  ob.ttl_s = 30;
  r2.acceptor_ingest(ob, 1.0);
  auto out = r2.take_outbox();
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].destination, "base");
  EXPECT_EQ(r2.counters().forwarded_on, 1);
}

TEST(Dispatcher, SkipYieldsFailureToBrain) {
  auto d = robot("r1", {}, {{"sci", kSkip}});
  d.set_software_network({"sci"});
  auto id = d.frontend_submit("sci", {}, 0.0);
  auto o = d.take_outcomes();
  ASSERT_EQ(o.size(), 1u);
  EXPECT_EQ(o[0].id, id);
  EXPECT_FALSE(o[0].success);
  EXPECT_FALSE(o[0].timed_out);
  EXPECT_EQ(d.counters().failures_skip, 1);
}

TEST(Dispatcher, MissingResultTimesOut) {
  auto d = robot("r1", {}, {{"t", "base"}});
  d.set_software_network({"t"});
  d.frontend_submit("t", {}, 0.0, 30, 50);
  EXPECT_EQ(d.expire_timeouts(49.9), 0);
  EXPECT_EQ(d.next_timeout(), 50.0);
  EXPECT_EQ(d.expire_timeouts(50.0), 1);
  auto o = d.take_outcomes();
  ASSERT_EQ(o.size(), 1u);
  EXPECT_TRUE(o[0].timed_out);
  EXPECT_FALSE(o[0].success);
}

TEST(Dispatcher, DuplicateAndLateResultsAreSuppressed) {
  auto d = robot("r1", {}, {{"t", "base"}});
  d.set_software_network({"t"});
  auto id = d.frontend_submit("t", {}, 0.0);
  Dispatchable r;
  r.kind = DispatchableKind::kResult;
  r.id = id;
  r.requester = "r1";
  r.task_id = "t";
  r.ttl_s = 100;
  r.success = true;
  d.acceptor_ingest(r, 1.0);
  d.acceptor_ingest(r, 2.0);
  EXPECT_EQ(d.take_outcomes().size(), 1u);
  EXPECT_EQ(d.counters().duplicates, 1);
  r.id = "r1:99";
  d.acceptor_ingest(r, 3.0);
  EXPECT_EQ(d.counters().late_results, 1);
}

TEST(Dispatcher, MalformedAndExpiredAreDropped) {
  auto d = robot("r1", {"t"}, {{"t", "r1"}});
  d.acceptor_ingest(Dispatchable{}, 0.0);
  EXPECT_EQ(d.counters().dropped_malformed, 1);
  Dispatchable ob;
  ob.id = "x:1";
  ob.requester = "x";
  ob.task_id = "t";
  ob.ttl_s = 5;
  d.acceptor_ingest(ob, 6.0);
  EXPECT_EQ(d.counters().dropped_expired, 1);
  EXPECT_TRUE(d.take_backend_jobs().empty());
}

TEST(Dispatcher, TtlSweepDropsOnlyExpired) {
  auto d = robot("r1", {}, {{"a", "base"}, {"b", "base"}});
  d.set_software_network({"a", "b"});
  d.frontend_submit("a", {}, 0.0, 30);
  d.frontend_submit("b", {}, 0.0, 100);
  EXPECT_EQ(d.ttl_sweep(29.0), 0);
  EXPECT_EQ(d.max_overdue(31.0), 1.0);
  EXPECT_EQ(d.ttl_sweep(31.0), 1);
  auto out = d.take_outbox();
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].dispatchable.task_id, "b");
}

TEST(Dispatcher, DispatchableWireRoundTrip) {
  Dispatchable d;
  d.id = "r1:3/1";
  d.requester = "r1";
  d.task_id = "r1/plan";
  d.payload_bits = 1234.5;
  d.created_at_s = 12.25;
  d.ttl_s = 60;
  d.chained = {"r1/drive"};
  EXPECT_EQ(decode_dispatchable(encode_dispatchable(d)), d);
  EXPECT_THROW(decode_dispatchable("{not json"), Error);
}
