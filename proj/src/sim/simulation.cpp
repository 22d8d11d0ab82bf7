#include "pdra/sim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <sstream>

#include "pdra/alloc/baselines.hpp"
#include "pdra/alloc/branch_and_bound.hpp"
#include "pdra/alloc/milp.hpp"
#include "pdra/model/scenario.hpp"
#include "pdra/sim/scenarios.hpp"
#include "pdra/world/worldview.hpp"

namespace pdra::sim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDoneEps = 1e-9;

Json vec_json(const Vec2& v) { return Json::array({v.x, v.y}); }

}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kPdra: return "pdra";
    case Strategy::kSelfish: return "selfish";
    case Strategy::kNaive: return "naive";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "pdra") return Strategy::kPdra;
  if (name == "selfish") return Strategy::kSelfish;
  if (name == "naive") return Strategy::kNaive;
  throw Error("unknown allocator '" + name + "' (expected pdra, selfish or naive)");
}

struct Simulation::Impl {
  struct Job {
    Dispatchable obligation;
    double remaining;
    double cpu_s;
    double energy_j;
    double start;
    bool compliant;
  };
  struct Processor {
    std::vector<Job> jobs;
    double last_update = 0.0;
    long generation = 0;
  };
  struct Agent {
    std::string id;
    dispatch::Dispatcher disp;
    world::WorldView view;
    world::Flooder flooder;
    bool view_changed = false;
    double last_solve = -kInf;
    bool frozen = false;
    std::uint64_t status_seq = 0;
    std::vector<std::vector<std::string>> required_chains;
    std::vector<std::vector<std::string>> optional_chains;
    Processor cpu;

    Agent(std::string robot, dispatch::Dispatcher d, world::WorldView v)
        : id(robot), disp(std::move(d)), view(std::move(v)), flooder(std::move(robot)) {}
  };
  struct Item {
    double time;
    std::uint64_t seq;
    std::function<void()> fn;
    bool operator>(const Item& o) const { return time != o.time ? time > o.time : seq > o.seq; }
  };

  ScenarioSpec spec;  // ground truth; supervisor commands mutate it
  RunOptions opt;
  double period, ttl, timeout, status_period;
  std::vector<Agent> agents;
  std::map<std::string, size_t> index;
  net::Network network;
  std::map<LinkKey, double> truth_links;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> agenda;
  std::uint64_t next_seq = 0;
  double clock = 0.0;
  MetricsReport rep;
  std::map<std::string, AllocationTable> cache;
  std::vector<std::string> trace;
  std::function<void(const SimEvent&)> sink;

  Impl(ScenarioSpec scenario, RunOptions options)
      : spec(std::move(scenario)),
        opt(options),
        period(spec.planning_period_s),
        ttl(options.ttl_s > 0 ? options.ttl_s : 2.0 * spec.planning_period_s),
        timeout(options.timeout_s > 0 ? options.timeout_s : 3.0 * spec.planning_period_s),
        status_period(options.status_period_s > 0 ? options.status_period_s
                                                  : spec.planning_period_s / 6.0),
        network(spec.contact_plan, {options.loss_probability, options.seed}) {
    auto violations = validate_scenario(spec);
    if (!violations.empty()) throw Error("invalid scenario: " + violations.front());
    if (!(opt.duration_s > 0)) throw Error("duration must be positive");
    truth_links = average_link_throughput(spec.contact_plan, period);
    rep.scenario = spec.name;
    rep.strategy = to_string(opt.strategy);
    rep.seed = opt.seed;
    rep.duration_s = opt.duration_s;

    for (const auto& r : spec.robots) {
      std::set<std::string> resources, own;
      for (const auto& [task, load] : r.compute_load) resources.insert(task);
      for (const auto& t : spec.tasks) {
        if (t.owner_robot == r.robot_id) own.insert(t.task_id);
      }
      dispatch::Dispatcher d(r.robot_id, resources, {ttl, timeout, 4096});
      d.set_software_network(own);
      agents.emplace_back(r.robot_id, std::move(d), world::WorldView(spec));
      index[r.robot_id] = agents.size() - 1;
      rep.robots[r.robot_id] = {};
    }
    build_chains();
    if (opt.record_trace) {
      network.set_event_sink([this](const net::NetEvent& e) { on_net_event(e); });
    }

    const long periods = static_cast<long>(std::ceil(opt.duration_s / period - 1e-12));
    for (long k = 0; k < periods; ++k) {
      const double t = k * period;
      at(t, [this, k] { on_boundary(k); });
    }
    const long ticks = static_cast<long>(std::ceil(opt.duration_s / status_period - 1e-12));
    for (long m = 0; m < ticks; ++m) {
      at(m * status_period, [this] { on_status_tick(); });
    }
  }

  // --- plumbing ----------------------------------------------------------------------------
  void at(double t, std::function<void()> fn) { agenda.push({t, next_seq++, std::move(fn)}); }

  Agent& agent(const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw Error("unknown robot " + id);
    return agents[it->second];
  }

  const RobotSpec& robot(const std::string& id) const {
    const RobotSpec* r = spec.find_robot(id);
    if (!r) throw Error("unknown robot " + id);
    return *r;
  }

  Vec2 position(const RobotSpec& r) const {
    return position_at(r, spec.contact_plan.period_s, clock);
  }

  void emit(const std::string& kind, Json body, bool to_sink = true) {
    if (opt.record_trace) {
      Json line{{"t", clock}, {"kind", kind}};
      for (auto& [k, v] : body.items()) line[k] = v;
      trace.push_back(line.dump());
    }
    if (sink && to_sink) sink({kind, clock, std::move(body)});
  }

  void on_net_event(const net::NetEvent& e) {
    static const char* names[] = {"send", "deliver", "drop"};
    Json body{{"event", names[static_cast<int>(e.kind)]},
              {"packet", e.packet_id},
              {"payload", e.packet_kind == net::PacketKind::kStatus ? "status" : "dispatchable"},
              {"from", e.from},
              {"to", e.to},
              {"bits", e.size_bits}};
    if (!e.reason.empty()) body["reason"] = e.reason;
    if (opt.record_trace) {
      Json line{{"t", e.time_s}, {"kind", "net"}};
      for (auto& [k, v] : body.items()) line[k] = v;
      trace.push_back(line.dump());
    }
  }

  void build_chains() {
    std::map<std::string, const TaskSpec*> by_id;
    std::set<std::string> has_parent;
    for (const auto& t : spec.tasks) {
      by_id[t.task_id] = &t;
      for (const auto& c : t.children) has_parent.insert(c);
    }
    for (const auto& t : spec.tasks) {
      if (has_parent.count(t.task_id)) continue;
      std::vector<std::string> chain{t.task_id};
      for (const TaskSpec* cur = &t; !cur->children.empty();) {
        auto it = by_id.find(cur->children.front());
        if (it == by_id.end()) break;
        cur = it->second;
        chain.push_back(cur->task_id);
      }
      Agent& a = agent(t.owner_robot);
      (t.required ? a.required_chains : a.optional_chains).push_back(std::move(chain));
    }
  }

  // --- allocation ----------------------------------------------------------------------------
  AllocationTable compute_table(const ProblemInstance& problem) {
    const std::string key = std::string(to_string(opt.strategy)) + "|" + fingerprint(problem);
    auto hit = cache.find(key);
    if (hit != cache.end()) return hit->second;
    SolveOptions so;
    so.time_budget_s = 0.0;
    so.node_limit = opt.node_limit;
    AllocationTable table;
    switch (opt.strategy) {
      case Strategy::kNaive:
        table = allocate_naive(problem);
        break;
      case Strategy::kSelfish:
        table = allocate_selfish(problem, problem.alpha, so);
        break;
      case Strategy::kPdra: {
        auto sol = solve_exact(build_milp(problem), so);
        table = sol.has_solution() ? extract_allocation_table(sol, problem)
                                   : allocate_naive(problem);
        break;
      }
    }
    cache[key] = table;
    return table;
  }

  void maybe_resolve(Agent& a) {
    if (a.frozen) return;
    if (!world::should_resolve(a.view_changed, a.last_solve, clock, period)) return;
    a.view_changed = false;
    a.last_solve = clock;
    ++rep.resolves;
    AllocationTable next = compute_table(a.view.problem());
    if (a.disp.table().version > 0 && next.assignment == a.disp.table().assignment) return;
    next.version = a.disp.table().version + 1;
    install_table(a, std::move(next));
  }

  void install_table(Agent& a, AllocationTable table) {
    for (const auto& [task, executor] : table.assignment) {
      const TaskSpec* t = spec.find_task(task);
      if (!t || t->owner_robot != a.id) continue;
      auto& hist = rep.allocation_history[task];
      if (hist.empty() || hist.back().executor != executor)
        hist.push_back({clock, executor, table.version});
    }
    Json assignment = Json::object();
    for (const auto& [task, executor] : table.assignment) assignment[task] = executor;
    emit("allocation_update",
         {{"robot", a.id}, {"version", table.version}, {"assignment", assignment}});
    a.disp.set_table(std::move(table));
  }

  // --- brains ---------------------------------------------------------------------------------
  double jitter(size_t agent_index, long k) const {
    if (opt.dispatch_jitter_s <= 0) return 0.0;
    std::seed_seq seq{static_cast<std::uint64_t>(opt.seed), static_cast<std::uint64_t>(agent_index),
                      static_cast<std::uint64_t>(k)};
    std::mt19937_64 rng(seq);
    return std::uniform_real_distribution<double>(0.0, opt.dispatch_jitter_s)(rng);
  }

  void on_boundary(long k) {
    for (auto& a : agents) maybe_resolve(a);
    if (!opt.autonomy) return;
    for (size_t i = 0; i < agents.size(); ++i) {
      if (agents[i].required_chains.empty() && agents[i].optional_chains.empty()) continue;
      const double t = clock + jitter(i, k);
      if (t >= opt.duration_s) continue;
      at(t, [this, i] { brain_dispatch(agents[i]); });
    }
  }

  void brain_dispatch(Agent& a) {
    for (const auto& chain : a.required_chains) submit_chain(a, chain, 0.0, 0.0);
    const RobotSpec& r = robot(a.id);
    if (!in_science_region(spec, r, position(r))) return;
    for (const auto& chain : a.optional_chains) submit_chain(a, chain, 0.0, 0.0);
  }

  std::string submit_chain(Agent& a, const std::vector<std::string>& chain, double ttl_s,
                           double timeout_s) {
    std::vector<std::string> rest(chain.begin() + 1, chain.end());
    std::string id = a.disp.frontend_submit(chain.front(), rest, clock, ttl_s, timeout_s);
    const double deadline = clock + (timeout_s > 0 ? timeout_s : timeout);
    Agent* ap = &a;
    at(deadline, [this, ap] { ap->disp.expire_timeouts(clock); });
    emit("task_event", {{"event", "submit"}, {"robot", a.id}, {"task", chain.front()}, {"id", id}});
    return id;
  }

  // --- status flooding --------------------------------------------------------------------------
  std::vector<std::string> current_neighbors(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& n : network.index().neighbors(id)) {
      if (network.index().up(id, n, clock)) out.push_back(n);
    }
    return out;
  }

  void send_statuses(Agent& a) {
    for (auto& [neighbor, msg] : a.flooder.flood_policy(a.view, current_neighbors(a.id), clock)) {
      net::Packet p;
      p.kind = net::PacketKind::kStatus;
      p.source = a.id;
      p.destination = neighbor;
      p.body = world::encode_status(msg);
      p.size_bits = 8.0 * static_cast<double>(p.body.size());
      network.enqueue_direct(std::move(p), clock);
    }
  }

  void on_status_tick() {
    for (auto& a : agents) {
      const RobotSpec& r = robot(a.id);
      world::StatusMessage m;
      m.origin = a.id;
      m.timestamp_s = clock;
      m.battery = r.battery;
      m.position = position(r);
      m.science_region = in_science_region(spec, r, m.position);
      for (const auto& [key, bps] : truth_links) {
        if (key.first == a.id) m.observed_link_throughputs[key.second] = bps;
      }
      // Links the truth has lost are reported as zero so views drop them.
      for (const auto& [key, bps] : a.view.link_throughputs()) {
        if (key.first == a.id && !truth_links.count(key))
          m.observed_link_throughputs[key.second] = 0.0;
      }
      m.sequence_number = ++a.status_seq;
      if (a.view.merge_status(m).changed) a.view_changed = true;
      emit("status", {{"robot", a.id},
                      {"battery", m.battery},
                      {"position", vec_json(m.position)},
                      {"science_region", m.science_region},
                      {"seq", m.sequence_number}});
      send_statuses(a);
    }
    for (auto& a : agents) maybe_resolve(a);
    Json totals{{"cpu_s", rep.total_cpu_s},
                {"energy_j", rep.total_energy_j},
                {"samples_taken", rep.samples_taken},
                {"samples_analyzed", rep.samples_analyzed},
                {"samples_stored", rep.samples_stored}};
    emit("metrics_tick", totals);
  }

  void on_status_delivered(Agent& a, const std::string& body) {
    world::StatusMessage m;
    try {
      m = world::decode_status(body);
    } catch (const Error&) {
      return;
    }
    auto merged = a.view.merge_status(m);
    if (!merged.applied) return;
    if (merged.changed) a.view_changed = true;
    send_statuses(a);
  }

  // --- processors -------------------------------------------------------------------------------
  double rate(const Agent& a) const {
    const double cores = robot(a.id).max_compute_cores;
    return std::min(1.0, cores / static_cast<double>(a.cpu.jobs.size()));
  }

  void advance(Agent& a) {
    auto& cpu = a.cpu;
    if (!cpu.jobs.empty()) {
      const double done = rate(a) * (clock - cpu.last_update);
      for (auto& j : cpu.jobs) j.remaining -= done;
    }
    cpu.last_update = clock;
  }

  void reschedule(Agent& a) {
    auto& cpu = a.cpu;
    ++cpu.generation;
    if (cpu.jobs.empty()) return;
    double least = kInf;
    for (const auto& j : cpu.jobs) least = std::min(least, j.remaining);
    const double t = clock + std::max(0.0, least) / rate(a);
    const long gen = cpu.generation;
    Agent* ap = &a;
    at(t, [this, ap, gen] { on_cpu(*ap, gen); });
  }

  void start_job(Agent& a, Dispatchable ob) {
    auto lookup = a.disp.table().lookup(ob.task_id);
    const bool compliant = !lookup || *lookup == a.id;
    const RobotSpec& r = robot(a.id);
    auto load = r.compute_load.find(ob.task_id);
    auto watts = r.power.find(ob.task_id);
    if (!a.disp.has_resource(ob.task_id) || load == r.compute_load.end() ||
        watts == r.power.end()) {
      record_execution(a, ob, clock, 0.0, 0.0, false, compliant);
      a.disp.backend_complete(ob, false, 0.0, clock);
      return;
    }
    advance(a);
    const double m = battery_multiplier(r.battery, spec.battery_kappa);
    const double cpu_s = load->second * period * m;
    const double energy = watts->second * period * m;
    emit("task_event",
         {{"event", "start"}, {"robot", a.id}, {"task", ob.task_id}, {"id", ob.id}});
    a.cpu.jobs.push_back({std::move(ob), cpu_s, cpu_s, energy, clock, compliant});
    reschedule(a);
  }

  void on_cpu(Agent& a, long gen) {
    if (gen != a.cpu.generation) return;
    advance(a);
    std::vector<Job> finished;
    auto& jobs = a.cpu.jobs;
    for (auto it = jobs.begin(); it != jobs.end();) {
      if (it->remaining <= kDoneEps * std::max(1.0, it->cpu_s)) {
        finished.push_back(std::move(*it));
        it = jobs.erase(it);
      } else {
        ++it;
      }
    }
    reschedule(a);
    for (auto& j : finished) {
      record_execution(a, j.obligation, j.start, j.cpu_s, j.energy_j, true, j.compliant);
      const TaskSpec* t = spec.find_task(j.obligation.task_id);
      a.disp.backend_complete(j.obligation, true, t ? t->product_size_bits : 0.0, clock);
    }
  }

  void record_execution(Agent& a, const Dispatchable& ob, double start, double cpu_s,
                        double energy, bool success, bool compliant) {
    const TaskSpec* t = spec.find_task(ob.task_id);
    ExecutionRecord e{ob.id, ob.task_id, t ? t->owner_robot : std::string(), a.id,
                      ob.requester, start, clock, cpu_s, energy, success, compliant};
    auto& rm = rep.robots[a.id];
    rm.cpu_s += cpu_s;
    rm.energy_j += energy;
    rm.compute_cpu_s += cpu_s;
    rm.compute_energy_j += energy;
    ++rm.executions;
    rep.compute_cpu_s += cpu_s;
    rep.compute_energy_j += energy;
    rep.total_cpu_s += cpu_s;
    rep.total_energy_j += energy;
    if (!compliant) ++rep.noncompliant_executions;
    if (success && t) {
      if (t->sample_stage == SampleStage::kTake) ++rep.samples_taken;
      if (t->sample_stage == SampleStage::kAnalyze) ++rep.samples_analyzed;
      if (t->sample_stage == SampleStage::kStore) ++rep.samples_stored;
    }
    emit("task_event", {{"event", success ? "finish" : "fail"},
                        {"robot", a.id},
                        {"task", ob.task_id},
                        {"id", ob.id},
                        {"cpu_s", cpu_s},
                        {"energy_j", energy}});
    rep.executions.push_back(std::move(e));
  }

  // --- network -----------------------------------------------------------------------------------
  void account_hops() {
    for (const auto& h : network.take_hops()) {
      const LinkCoding c = spec.coding_for(h.from, h.to);
      const double tx_e = h.size_bits * c.encode_energy_j_per_bit;
      const double rx_e = h.size_bits * c.decode_energy_j_per_bit;
      const double tx_c = h.size_bits * c.encode_load_per_bps;
      const double rx_c = h.size_bits * c.decode_load_per_bps;
      auto& s = rep.robots[h.from];
      auto& r = rep.robots[h.to];
      s.comm_energy_j += tx_e;
      s.energy_j += tx_e;
      s.comm_cpu_s += tx_c;
      s.cpu_s += tx_c;
      r.comm_energy_j += rx_e;
      r.energy_j += rx_e;
      r.comm_cpu_s += rx_c;
      r.cpu_s += rx_c;
      rep.comm_energy_j += tx_e;
      rep.comm_energy_j += rx_e;
      rep.comm_cpu_s += tx_c;
      rep.comm_cpu_s += rx_c;
      rep.total_energy_j += tx_e;
      rep.total_energy_j += rx_e;
      rep.total_cpu_s += tx_c;
      rep.total_cpu_s += rx_c;
      rep.bits_delivered += h.size_bits;
    }
  }

  void on_delivery(const net::Delivery& d) {
    Agent& a = agent(d.packet.destination);
    if (d.packet.kind == net::PacketKind::kStatus) {
      on_status_delivered(a, d.packet.body);
      return;
    }
    Dispatchable x;
    try {
      x = decode_dispatchable(d.packet.body);
    } catch (const Error&) {
      a.disp.acceptor_ingest(Dispatchable{}, clock, true);  // counted as malformed
      return;
    }
    a.disp.acceptor_ingest(std::move(x), clock, true);
  }

  void pump() {
    bool busy = true;
    while (busy) {
      busy = false;
      for (auto& a : agents) {
        for (auto& m : a.disp.take_outbox()) {
          busy = true;
          net::Packet p;
          p.kind = net::PacketKind::kDispatchable;
          p.source = a.id;
          p.destination = m.destination;
          p.body = encode_dispatchable(m.dispatchable);
          p.size_bits = m.dispatchable.payload_bits + 8.0 * static_cast<double>(p.body.size());
          p.expires_at_s = m.dispatchable.expires_at();
          if (p.source != p.destination) ++rep.dispatchable_transfers;
          network.enqueue(std::move(p), clock);
        }
        for (auto& job : a.disp.take_backend_jobs()) {
          busy = true;
          start_job(a, std::move(job));
        }
        for (auto& o : a.disp.take_outcomes()) {
          if (o.success) ++rep.successes;
          else ++rep.failures;
          emit("task_event", {{"event", "outcome"},
                              {"robot", a.id},
                              {"task", o.task_id},
                              {"id", o.id},
                              {"success", o.success},
                              {"timed_out", o.timed_out}});
          rep.outcomes.push_back({o.id, o.task_id, a.id, o.success, o.timed_out, o.producer,
                                  o.submitted_at_s, o.time_s});
        }
      }
    }
  }

  void sweep_and_audit() {
    for (auto& a : agents) a.disp.ttl_sweep(clock);
    network.sweep_expired(clock);
    double overdue = network.max_overdue(clock);
    for (const auto& a : agents) overdue = std::max(overdue, a.disp.max_overdue(clock));
    if (overdue > 0) {
      ++rep.ttl_violations;
      rep.max_ttl_overdue_s = std::max(rep.max_ttl_overdue_s, overdue);
    }
  }

  void run_until(double t) {
    for (;;) {
      const double ta = agenda.empty() ? kInf : agenda.top().time;
      const double tn = network.next_event_time();
      const double next = std::min(ta, tn);
      if (next > t) break;
      clock = std::max(clock, next);
      if (tn <= ta) {
        auto deliveries = network.step(tn);
        account_hops();
        for (const auto& d : deliveries) on_delivery(d);
      } else {
        Item item = agenda.top();
        agenda.pop();
        item.fn();
      }
      pump();
      account_hops();
      sweep_and_audit();
    }
    clock = std::max(clock, t);
  }

  // --- supervisor inputs -------------------------------------------------------------------------
  void replan() {
    auto before = truth_links;
    spec.contact_plan = compute_bandwidth_from_positions(spec);
    truth_links = average_link_throughput(spec.contact_plan, period);
    network.set_plan(spec.contact_plan, clock);
    std::set<LinkKey> keys;
    for (const auto& [k, v] : before) keys.insert(k);
    for (const auto& [k, v] : truth_links) keys.insert(k);
    for (const auto& k : keys) {
      auto b = before.find(k);
      auto n = truth_links.find(k);
      const double old_bps = b == before.end() ? 0.0 : b->second;
      const double new_bps = n == truth_links.end() ? 0.0 : n->second;
      if (old_bps == new_bps) continue;
      emit("link_update", {{"from", k.first}, {"to", k.second}, {"old_bps", old_bps},
                           {"bps", new_bps}});
    }
    pump();
  }

  Json snapshot() const {
    Json robots = Json::array();
    for (const auto& a : agents) {
      const RobotSpec& r = robot(a.id);
      const Vec2 p = position(r);
      robots.push_back({{"id", a.id},
                        {"position", vec_json(p)},
                        {"battery", r.battery},
                        {"base_station", r.base_station},
                        {"science_region", in_science_region(spec, r, p)},
                        {"max_compute_cores", r.max_compute_cores},
                        {"running", a.cpu.jobs.size()},
                        {"table_version", a.disp.table().version},
                        {"pending", a.disp.pending_count()}});
    }
    Json links = Json::array();
    for (const auto& [k, bps] : truth_links) {
      links.push_back({{"from", k.first},
                       {"to", k.second},
                       {"bps", bps},
                       {"up", network.index().up(k.first, k.second, clock)}});
    }
    Json allocation = Json::object();
    for (const auto& a : agents) {
      for (const auto& [task, executor] : a.disp.table().assignment) {
        const TaskSpec* t = spec.find_task(task);
        if (t && t->owner_robot == a.id) allocation[task] = executor;
      }
    }
    Json regions = Json::array();
    for (const auto& poly : spec.science_regions) {
      Json v = Json::array();
      for (const auto& p : poly.vertices) v.push_back(vec_json(p));
      regions.push_back(v);
    }
    Json obstacles = Json::array();
    for (const auto& poly : spec.obstacles) {
      Json v = Json::array();
      for (const auto& p : poly.vertices) v.push_back(vec_json(p));
      obstacles.push_back(v);
    }
    return Json{{"schema", 1},
                {"time_s", clock},
                {"duration_s", opt.duration_s},
                {"strategy", to_string(opt.strategy)},
                {"arena", {{"min", vec_json(spec.arena.min)}, {"max", vec_json(spec.arena.max)}}},
                {"robots", robots},
                {"links", links},
                {"allocation", allocation},
                {"science_regions", regions},
                {"obstacles", obstacles},
                {"metrics",
                 {{"cpu_s", rep.total_cpu_s},
                  {"energy_j", rep.total_energy_j},
                  {"samples_taken", rep.samples_taken},
                  {"samples_analyzed", rep.samples_analyzed},
                  {"samples_stored", rep.samples_stored}}}};
  }

  MetricsReport report() const {
    MetricsReport r = rep;
    for (const auto& a : agents) {
      const auto& c = a.disp.counters();
      r.submitted += c.submitted;
      r.obligations_sent += c.obligations_sent;
      r.obligations_received += c.obligations_received;
      r.results_sent += c.results_sent;
      r.results_received += c.results_received;
      r.forwarded_on += c.forwarded_on;
      r.chain_expansions += c.chain_expansions;
      r.dropped_expired += c.dropped_expired;
      r.dropped_malformed += c.dropped_malformed;
      r.duplicates += c.duplicates;
      r.late_results += c.late_results;
      r.timeouts += c.timeouts;
    }
    const auto& n = network.counters();
    r.status_messages = n.status_enqueued;
    r.hops = n.hops;
    r.net_dropped_expired = n.dropped_expired;
    r.net_dropped_no_route = n.dropped_no_route;
    r.net_dropped_loss = n.dropped_loss;
    return r;
  }
};

Simulation::Simulation(ScenarioSpec scenario, RunOptions options)
    : impl_(std::make_unique<Impl>(std::move(scenario), options)) {}

Simulation::~Simulation() = default;

void Simulation::run_until(double t) { impl_->run_until(t); }
double Simulation::now() const { return impl_->clock; }
double Simulation::duration() const { return impl_->opt.duration_s; }
MetricsReport Simulation::report() const { return impl_->report(); }
const std::vector<std::string>& Simulation::trace() const { return impl_->trace; }
Json Simulation::snapshot() const { return impl_->snapshot(); }

void Simulation::move_robot(const std::string& robot_id, Vec2 position) {
  RobotSpec* r = impl_->spec.find_robot(robot_id);
  if (!r) throw Error("unknown robot " + robot_id);
  const Arena& a = impl_->spec.arena;
  if (!(position.x >= a.min.x && position.x <= a.max.x && position.y >= a.min.y &&
        position.y <= a.max.y))
    throw Error("position outside the arena");
  r->position = position;
  r->waypoints.clear();
  impl_->replan();
}

void Simulation::set_battery(const std::string& robot_id, double battery) {
  RobotSpec* r = impl_->spec.find_robot(robot_id);
  if (!r) throw Error("unknown robot " + robot_id);
  if (!(battery >= 0.0 && battery <= 1.0)) throw Error("battery outside [0, 1]");
  r->battery = battery;
}

void Simulation::set_event_sink(std::function<void(const SimEvent&)> sink) {
  impl_->sink = std::move(sink);
}

std::string Simulation::submit(const std::string& robot_id, const std::string& task_id,
                               const std::vector<std::string>& chain, double ttl_s,
                               double timeout_s) {
  auto& a = impl_->agent(robot_id);
  std::vector<std::string> full{task_id};
  full.insert(full.end(), chain.begin(), chain.end());
  std::string id = impl_->submit_chain(a, full, ttl_s, timeout_s);
  impl_->pump();
  return id;
}

void Simulation::freeze_table(const std::string& robot_id, AllocationTable table) {
  auto& a = impl_->agent(robot_id);
  a.frozen = true;
  table.version = std::max(table.version, a.disp.table().version + 1);
  impl_->install_table(a, std::move(table));
}

const dispatch::Dispatcher& Simulation::dispatcher(const std::string& robot_id) const {
  return impl_->agent(robot_id).disp;
}

const net::Network& Simulation::network() const { return impl_->network; }

MetricsReport run(const ScenarioSpec& scenario, const RunOptions& options,
                  std::vector<std::string>* trace) {
  RunOptions o = options;
  if (trace) o.record_trace = true;
  Simulation sim(scenario, o);
  sim.run();
  if (trace) *trace = sim.trace();
  return sim.report();
}

std::vector<MetricsReport> compare_strategies(const ScenarioSpec& scenario, double duration_s,
                                              std::uint64_t seed, RunOptions base) {
  const Strategy order[] = {Strategy::kPdra, Strategy::kSelfish, Strategy::kNaive};
  std::vector<MetricsReport> out(3);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < 3; ++i) {
    RunOptions o = base;
    o.duration_s = duration_s;
    o.seed = seed;
    o.strategy = order[i];
    o.record_trace = false;
    out[i] = run(scenario, o);
  }
  return out;
}

std::string comparison_table(const std::vector<MetricsReport>& reports) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "strategy" << std::right << std::setw(12) << "CPU [s]"
     << std::setw(14) << "Energy [J]" << std::setw(8) << "Taken" << std::setw(10) << "Analyzed"
     << std::setw(8) << "Stored" << '\n';
  os << std::fixed;
  for (const auto& r : reports) {
    os << std::left << std::setw(10) << r.strategy << std::right << std::setw(12)
       << std::setprecision(1) << r.total_cpu_s << std::setw(14) << std::setprecision(1)
       << r.total_energy_j << std::setw(8) << r.samples_taken << std::setw(10)
       << r.samples_analyzed << std::setw(8) << r.samples_stored << '\n';
  }
  return os.str();
}

Json comparison_json(const std::vector<MetricsReport>& reports) {
  Json rows = Json::array();
  for (const auto& r : reports) {
    rows.push_back({{"strategy", r.strategy},
                    {"cpu_s", r.total_cpu_s},
                    {"energy_j", r.total_energy_j},
                    {"taken", r.samples_taken},
                    {"analyzed", r.samples_analyzed},
                    {"stored", r.samples_stored}});
  }
  return rows;
}

}  // namespace pdra::sim
