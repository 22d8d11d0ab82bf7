#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "pdra/model/scenario.hpp"
#include "pdra/model/types.hpp"

namespace pdra::net {

inline constexpr double kNever = std::numeric_limits<double>::infinity();
// Routes may wait for contacts at most this many plan periods ahead.
inline constexpr int kRouteHorizonPeriods = 3;

struct LinkState {
  double throughput_bps = 0.0;
  double latency_s = 0.0;
};

// State of the directed pair at time t, evaluated modulo the plan period over half-open windows.
std::optional<LinkState> link_state(const ContactPlan& plan, const std::string& from,
                                    const std::string& to, double t);

// Earliest transmission of `size_bits` over from->to starting no earlier than `t` that fits
// entirely inside one contact (contiguous windows of equal rate merge across period boundaries).
struct Transmission {
  double start_s = 0.0;
  double end_s = 0.0;      // transmission complete at the sender
  double arrival_s = 0.0;  // end_s plus propagation latency
};

// Per-pair window index over a contact plan.
class ContactIndex {
 public:
  ContactIndex() = default;
  explicit ContactIndex(const ContactPlan& plan);

  // nullopt when nothing fits before `not_after`.
  std::optional<Transmission> next_fit(const std::string& from, const std::string& to, double t,
                                       double size_bits, double not_after) const;
  const std::vector<std::string>& neighbors(const std::string& from) const;
  bool up(const std::string& from, const std::string& to, double t) const;
  double period_s() const { return period_; }

 private:
  struct Span {
    double start, end, bps, latency;
  };
  double period_ = 1.0;
  std::map<std::pair<std::string, std::string>, std::vector<Span>> spans_;
  std::map<std::string, std::vector<std::string>> neighbors_;
};

struct Hop {
  std::string from;
  std::string to;
  double start_s = 0.0;
  double arrival_s = 0.0;
};

struct Route {
  std::vector<Hop> hops;
  double arrival_s = 0.0;
};

// Minimum-arrival route over the time-expanded contact graph. Waiting at nodes is free; the
// search gives up beyond kRouteHorizonPeriods plan periods after `t`.
std::optional<Route> earliest_arrival_route(const ContactPlan& plan, const std::string& src,
                                            const std::string& dst, double t, double size_bits);
std::optional<Route> earliest_arrival_route(const ContactIndex& index, const std::string& src,
                                            const std::string& dst, double t, double size_bits);

enum class PacketKind { kDispatchable, kStatus };

struct Packet {
  std::uint64_t id = 0;  // assigned by the network
  PacketKind kind = PacketKind::kDispatchable;
  std::string source;
  std::string destination;
  double size_bits = 0.0;
  double expires_at_s = kNever;
  std::string body;
};

struct Delivery {
  Packet packet;
  double time_s = 0.0;
};

// One transmission over one directed link, reported when it reaches the receiver.
struct HopRecord {
  std::uint64_t packet_id = 0;
  PacketKind kind = PacketKind::kDispatchable;
  std::string from;
  std::string to;
  double size_bits = 0.0;
  double start_s = 0.0;
  double time_s = 0.0;
};

struct NetCounters {
  long enqueued = 0;
  long delivered = 0;
  long hops = 0;
  long dropped_expired = 0;
  long dropped_no_route = 0;
  long dropped_loss = 0;
  long dispatchables_enqueued = 0;
  long dispatchables_delivered = 0;
  long status_enqueued = 0;
  std::map<std::pair<std::string, std::string>, double> bits;  // per directed link, delivered
};

struct NetworkOptions {
  double loss_probability = 0.0;  // independent per hop
  std::uint64_t seed = 0;
};

enum class NetEventKind { kSend, kDeliver, kDrop };

struct NetEvent {
  NetEventKind kind;
  double time_s;
  std::uint64_t packet_id;
  PacketKind packet_kind;
  std::string from;
  std::string to;
  double size_bits;
  std::string reason;  // drops only
};

// Store-and-forward transport. Each packet is source-routed at enqueue time; every directed
// link serves its queue FIFO, one packet at a time, and never starts a transmission that would
// not finish inside the current contact.
class Network {
 public:
  explicit Network(ContactPlan plan, NetworkOptions options = {});

  // Returns the packet id, or 0 when no route exists within the horizon (counted as a drop).
  std::uint64_t enqueue(Packet packet, double now);
  // Single-hop send over a link that must be up at `now`; 0 when it is not.
  std::uint64_t enqueue_direct(Packet packet, double now);

  // Processes every internal event up to and including `until`.
  std::vector<Delivery> step(double until);
  double next_event_time() const;

  // Removes every queued or in-flight packet with expires_at < now.
  int sweep_expired(double now);
  // Latest expiry overrun among packets still held; 0 when none is overdue.
  double max_overdue(double now) const;

  // Replaces the contact plan; queued packets are re-routed from where they sit.
  void set_plan(ContactPlan plan, double now);
  const ContactPlan& plan() const { return plan_; }
  const ContactIndex& index() const { return index_; }

  const NetCounters& counters() const { return counters_; }
  std::vector<HopRecord> take_hops();
  size_t packets_in_network() const;

  void set_event_sink(std::function<void(const NetEvent&)> sink) { sink_ = std::move(sink); }

 private:
  struct Held {
    Packet packet;
    std::vector<std::string> path;  // nodes from source to destination
    size_t at = 0;                   // index into path of the current node
  };
  struct LinkQueue {
    std::deque<Held> waiting;
    std::optional<Held> sending;
    double send_start = 0.0;
    double send_end = 0.0;
    double arrival = 0.0;
    long generation = 0;  // invalidates stale wake-ups
    bool wake_pending = false;
  };
  struct InFlight {
    Held held;
    double start;
  };
  enum class Ev { kWake, kSent, kArrive };
  struct Event {
    double time;
    std::uint64_t seq;
    Ev kind;
    std::pair<std::string, std::string> link;
    long generation;
    std::uint64_t flight;  // kArrive only
    bool operator>(const Event& o) const {
      return time != o.time ? time > o.time : seq > o.seq;
    }
  };

  void push_event(double time, Ev kind, const std::pair<std::string, std::string>& link,
                  long generation, std::uint64_t flight = 0);
  void place(Held held, double now);
  void try_start(const std::pair<std::string, std::string>& key, double now);
  void drop(const Packet& p, double now, const std::string& from, const std::string& to,
            const std::string& reason);
  void emit(NetEventKind kind, double time, const Packet& p, const std::string& from,
            const std::string& to, const std::string& reason = {});
  std::optional<std::vector<std::string>> route_path(const std::string& from,
                                                     const std::string& to, double now,
                                                     double size) const;

  ContactPlan plan_;
  ContactIndex index_;
  NetworkOptions options_;
  std::mt19937_64 rng_;
  std::map<std::pair<std::string, std::string>, LinkQueue> links_;
  std::map<std::uint64_t, InFlight> flights_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::vector<Delivery> ready_;
  std::vector<HopRecord> hops_;
  NetCounters counters_;
  std::uint64_t next_packet_ = 1;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_flight_ = 1;
  std::function<void(const NetEvent&)> sink_;
};

}  // namespace pdra::net
