#include "pdra/net/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pdra::net {
namespace {

constexpr double kTimeEps = 1e-9;

}  // namespace

std::optional<LinkState> link_state(const ContactPlan& plan, const std::string& from,
                                    const std::string& to, double t) {
  const double phase = t - std::floor(t / plan.period_s) * plan.period_s;
  for (const auto& w : plan.windows) {
    if (w.from == from && w.to == to && w.start_s <= phase && phase < w.end_s)
      return LinkState{w.throughput_bps, w.latency_s};
  }
  return std::nullopt;
}

ContactIndex::ContactIndex(const ContactPlan& plan) : period_(plan.period_s) {
  for (const auto& w : plan.windows) {
    if (!(w.throughput_bps > 0) || !(w.end_s > w.start_s)) continue;
    spans_[{w.from, w.to}].push_back({w.start_s, w.end_s, w.throughput_bps, w.latency_s});
  }
  for (auto& [key, list] : spans_) {
    std::sort(list.begin(), list.end(),
              [](const Span& a, const Span& b) { return a.start < b.start; });
    neighbors_[key.first].push_back(key.second);
  }
}

const std::vector<std::string>& ContactIndex::neighbors(const std::string& from) const {
  static const std::vector<std::string> none;
  auto it = neighbors_.find(from);
  return it == neighbors_.end() ? none : it->second;
}

bool ContactIndex::up(const std::string& from, const std::string& to, double t) const {
  auto it = spans_.find({from, to});
  if (it == spans_.end()) return false;
  const double phase = t - std::floor(t / period_) * period_;
  return std::any_of(it->second.begin(), it->second.end(),
                     [&](const Span& s) { return s.start <= phase && phase < s.end; });
}

std::optional<Transmission> ContactIndex::next_fit(const std::string& from, const std::string& to,
                                                   double t, double size_bits,
                                                   double not_after) const {
  auto it = spans_.find({from, to});
  if (it == spans_.end() || t > not_after) return std::nullopt;
  const auto& spans = it->second;
  const long first = static_cast<long>(std::floor(t / period_));
  const long last = static_cast<long>(std::floor(not_after / period_)) + 1;
  const double horizon_end = static_cast<double>(last + 1) * period_;

  bool open = false;
  double a = 0, b = 0, bps = 0, lat = 0;
  auto try_interval = [&](double start, double end) -> std::optional<Transmission> {
    if (end >= horizon_end - kTimeEps) end = kNever;
    if (end <= t) return std::nullopt;
    const double s = std::max(start, t);
    if (s > not_after || s >= end) return std::nullopt;
    const double dur = size_bits / bps;
    if (s + dur > end + kTimeEps) return std::nullopt;
    return Transmission{s, s + dur, s + dur + lat};
  };
  for (long k = first; k <= last; ++k) {
    const double offset = static_cast<double>(k) * period_;
    for (const auto& sp : spans) {
      const double s0 = offset + sp.start, s1 = offset + sp.end;
      if (open && std::abs(s0 - b) <= kTimeEps && sp.bps == bps && sp.latency == lat) {
        b = s1;
        continue;
      }
      if (open) {
        if (auto fit = try_interval(a, b)) return fit;
      }
      open = true;
      a = s0;
      b = s1;
      bps = sp.bps;
      lat = sp.latency;
    }
  }
  if (open) return try_interval(a, b);
  return std::nullopt;
}

std::optional<Route> earliest_arrival_route(const ContactPlan& plan, const std::string& src,
                                            const std::string& dst, double t, double size_bits) {
  return earliest_arrival_route(ContactIndex(plan), src, dst, t, size_bits);
}

std::optional<Route> earliest_arrival_route(const ContactIndex& index, const std::string& src,
                                            const std::string& dst, double t, double size_bits) {
  if (src == dst) return Route{{}, t};
  const double not_after = t + kRouteHorizonPeriods * index.period_s();
  std::map<std::string, double> best{{src, t}};
  std::map<std::string, Hop> via;
  std::set<std::pair<double, std::string>> frontier{{t, src}};
  std::set<std::string> done;
  while (!frontier.empty()) {
    auto [time, node] = *frontier.begin();
    frontier.erase(frontier.begin());
    if (!done.insert(node).second) continue;
    if (node == dst) break;
    for (const auto& next : index.neighbors(node)) {
      if (done.count(next)) continue;
      auto fit = index.next_fit(node, next, time, size_bits, not_after);
      if (!fit) continue;
      auto it = best.find(next);
      if (it != best.end() && it->second <= fit->arrival_s) continue;
      if (it != best.end()) frontier.erase({it->second, next});
      best[next] = fit->arrival_s;
      via[next] = {node, next, fit->start_s, fit->arrival_s};
      frontier.insert({fit->arrival_s, next});
    }
  }
  if (!done.count(dst)) return std::nullopt;
  Route route;
  route.arrival_s = best[dst];
  for (std::string at = dst; at != src; at = via[at].from) route.hops.push_back(via[at]);
  std::reverse(route.hops.begin(), route.hops.end());
  return route;
}

Network::Network(ContactPlan plan, NetworkOptions options)
    : plan_(std::move(plan)), index_(plan_), options_(options), rng_(options.seed) {}

void Network::push_event(double time, Ev kind, const std::pair<std::string, std::string>& link,
                         long generation, std::uint64_t flight) {
  events_.push({time, next_seq_++, kind, link, generation, flight});
}

void Network::emit(NetEventKind kind, double time, const Packet& p, const std::string& from,
                   const std::string& to, const std::string& reason) {
  if (sink_) sink_({kind, time, p.id, p.kind, from, to, p.size_bits, reason});
}

void Network::drop(const Packet& p, double now, const std::string& from, const std::string& to,
                   const std::string& reason) {
  if (reason == "expired") ++counters_.dropped_expired;
  else if (reason == "loss") ++counters_.dropped_loss;
  else ++counters_.dropped_no_route;
  emit(NetEventKind::kDrop, now, p, from, to, reason);
}

std::optional<std::vector<std::string>> Network::route_path(const std::string& from,
                                                            const std::string& to, double now,
                                                            double size) const {
  auto route = earliest_arrival_route(index_, from, to, now, size);
  if (!route) return std::nullopt;
  std::vector<std::string> path{from};
  for (const auto& h : route->hops) path.push_back(h.to);
  return path;
}

std::uint64_t Network::enqueue(Packet packet, double now) {
  packet.id = next_packet_++;
  ++counters_.enqueued;
  if (packet.kind == PacketKind::kDispatchable) ++counters_.dispatchables_enqueued;
  else ++counters_.status_enqueued;
  auto path = route_path(packet.source, packet.destination, now, packet.size_bits);
  if (!path) {
    drop(packet, now, packet.source, packet.destination, "no_route");
    return 0;
  }
  const std::uint64_t id = packet.id;
  if (path->size() == 1) {
    ++counters_.delivered;
    if (packet.kind == PacketKind::kDispatchable) ++counters_.dispatchables_delivered;
    ready_.push_back({std::move(packet), now});
    return id;
  }
  place({std::move(packet), std::move(*path), 0}, now);
  return id;
}

std::uint64_t Network::enqueue_direct(Packet packet, double now) {
  if (!index_.up(packet.source, packet.destination, now)) return 0;
  packet.id = next_packet_++;
  ++counters_.enqueued;
  if (packet.kind == PacketKind::kDispatchable) ++counters_.dispatchables_enqueued;
  else ++counters_.status_enqueued;
  const std::uint64_t id = packet.id;
  std::vector<std::string> path{packet.source, packet.destination};
  place({std::move(packet), std::move(path), 0}, now);
  return id;
}

void Network::place(Held held, double now) {
  std::pair<std::string, std::string> key{held.path[held.at], held.path[held.at + 1]};
  links_[key].waiting.push_back(std::move(held));
  try_start(key, now);
}

void Network::try_start(const std::pair<std::string, std::string>& key, double now) {
  auto& lq = links_[key];
  while (!lq.sending && !lq.waiting.empty()) {
    Held& head = lq.waiting.front();
    auto fit = index_.next_fit(key.first, key.second, now, head.packet.size_bits,
                               now + kRouteHorizonPeriods * index_.period_s());
    if (!fit) {
      Held gone = std::move(head);
      lq.waiting.pop_front();
      drop(gone.packet, now, key.first, key.second, "no_contact");
      continue;
    }
    if (fit->start_s > now + kTimeEps) {
      if (!lq.wake_pending || fit->start_s < lq.send_start) {
        lq.wake_pending = true;
        lq.send_start = fit->start_s;
        push_event(fit->start_s, Ev::kWake, key, lq.generation);
      }
      return;
    }
    lq.wake_pending = false;
    lq.sending = std::move(head);
    lq.waiting.pop_front();
    lq.send_start = now;
    lq.send_end = now + (fit->end_s - fit->start_s);
    lq.arrival = lq.send_end + (fit->arrival_s - fit->end_s);
    emit(NetEventKind::kSend, now, lq.sending->packet, key.first, key.second);
    push_event(lq.send_end, Ev::kSent, key, lq.generation);
  }
}

std::vector<Delivery> Network::step(double until) {
  while (!events_.empty() && events_.top().time <= until) {
    Event ev = events_.top();
    events_.pop();
    const double now = ev.time;
    switch (ev.kind) {
      case Ev::kWake: {
        auto& lq = links_[ev.link];
        if (lq.wake_pending && lq.send_start == now) lq.wake_pending = false;
        try_start(ev.link, now);
        break;
      }
      case Ev::kSent: {
        auto& lq = links_[ev.link];
        if (ev.generation != lq.generation || !lq.sending) break;
        Held held = std::move(*lq.sending);
        lq.sending.reset();
        const double start = lq.send_start, arrival = lq.arrival;
        ++lq.generation;
        if (options_.loss_probability > 0 &&
            std::bernoulli_distribution(options_.loss_probability)(rng_)) {
          drop(held.packet, now, ev.link.first, ev.link.second, "loss");
        } else {
          std::uint64_t f = next_flight_++;
          flights_[f] = {std::move(held), start};
          push_event(arrival, Ev::kArrive, ev.link, 0, f);
        }
        try_start(ev.link, now);
        break;
      }
      case Ev::kArrive: {
        auto it = flights_.find(ev.flight);
        if (it == flights_.end()) break;
        InFlight flight = std::move(it->second);
        flights_.erase(it);
        Held& held = flight.held;
        const auto& from = held.path[held.at];
        const auto& to = held.path[held.at + 1];
        ++counters_.hops;
        counters_.bits[{from, to}] += held.packet.size_bits;
        hops_.push_back({held.packet.id, held.packet.kind, from, to, held.packet.size_bits,
                         flight.start, now});
        emit(NetEventKind::kDeliver, now, held.packet, from, to);
        ++held.at;
        if (held.at + 1 == held.path.size()) {
          ++counters_.delivered;
          if (held.packet.kind == PacketKind::kDispatchable) ++counters_.dispatchables_delivered;
          ready_.push_back({std::move(held.packet), now});
        } else {
          place(std::move(held), now);
        }
        break;
      }
    }
  }
  std::vector<Delivery> out;
  out.swap(ready_);
  return out;
}

double Network::next_event_time() const {
  double t = events_.empty() ? kNever : events_.top().time;
  for (const auto& d : ready_) t = std::min(t, d.time_s);
  return t;
}

int Network::sweep_expired(double now) {
  int dropped = 0;
  for (auto& [key, lq] : links_) {
    for (auto it = lq.waiting.begin(); it != lq.waiting.end();) {
      if (it->packet.expires_at_s < now) {
        drop(it->packet, now, key.first, key.second, "expired");
        it = lq.waiting.erase(it);
        ++dropped;
      } else {
        ++it;
      }
    }
    if (lq.sending && lq.sending->packet.expires_at_s < now) {
      drop(lq.sending->packet, now, key.first, key.second, "expired");
      lq.sending.reset();
      ++lq.generation;
      ++dropped;
    }
  }
  for (auto it = flights_.begin(); it != flights_.end();) {
    const Held& h = it->second.held;
    if (h.packet.expires_at_s < now) {
      drop(h.packet, now, h.path[h.at], h.path[h.at + 1], "expired");
      it = flights_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  if (dropped > 0) {
    for (auto& [key, lq] : links_) try_start(key, now);
  }
  return dropped;
}

double Network::max_overdue(double now) const {
  double worst = 0.0;
  auto check = [&](const Packet& p) { worst = std::max(worst, now - p.expires_at_s); };
  for (const auto& [key, lq] : links_) {
    for (const auto& h : lq.waiting) check(h.packet);
    if (lq.sending) check(lq.sending->packet);
  }
  for (const auto& [id, f] : flights_) check(f.held.packet);
  return worst;
}

size_t Network::packets_in_network() const {
  size_t n = flights_.size();
  for (const auto& [key, lq] : links_) n += lq.waiting.size() + (lq.sending ? 1 : 0);
  return n;
}

void Network::set_plan(ContactPlan plan, double now) {
  plan_ = std::move(plan);
  index_ = ContactIndex(plan_);
  std::vector<Held> moving;
  for (auto& [key, lq] : links_) {
    for (auto& h : lq.waiting) moving.push_back(std::move(h));
    lq.waiting.clear();
    lq.wake_pending = false;
  }
  for (auto& h : moving) {
    const std::string& at = h.path[h.at];
    auto path = route_path(at, h.packet.destination, now, h.packet.size_bits);
    if (!path) {
      drop(h.packet, now, at, h.packet.destination, "no_route");
      continue;
    }
    h.path = std::move(*path);
    h.at = 0;
    place(std::move(h), now);
  }
  for (auto& [key, lq] : links_) try_start(key, now);
}

std::vector<HopRecord> Network::take_hops() {
  std::vector<HopRecord> out;
  out.swap(hops_);
  return out;
}

}  // namespace pdra::net
