#include "pdra/dispatch/dispatcher.hpp"

#include <algorithm>
#include <limits>

namespace pdra::dispatch {

const char* to_string(RouteKind kind) {
  switch (kind) {
    case RouteKind::kExecuteLocal: return "execute_local";
    case RouteKind::kSend: return "send";
    case RouteKind::kFailToAcceptor: return "fail";
    case RouteKind::kDrop: return "drop";
  }
  return "?";
}

std::string successor_id(const std::string& id) {
  auto slash = id.find('/');
  if (slash == std::string::npos) return id + "/1";
  long k = std::stol(id.substr(slash + 1));
  return id.substr(0, slash) + "/" + std::to_string(k + 1);
}

Dispatcher::Dispatcher(std::string robot_id, std::set<std::string> local_resources,
                       DispatcherConfig config)
    : robot_id_(std::move(robot_id)), resources_(std::move(local_resources)), config_(config) {}

std::string Dispatcher::frontend_submit(const std::string& task_id,
                                        const std::vector<std::string>& chain, double now,
                                        double ttl_s, double timeout_s, double payload_bits) {
  const bool known = own_tasks_.empty()
                         ? resources_.count(task_id) > 0 || table_.lookup(task_id).has_value()
                         : own_tasks_.count(task_id) > 0;
  if (!known) throw Error("robot " + robot_id_ + ": unknown task " + task_id);
  if (ttl_s <= 0) ttl_s = config_.default_ttl_s;
  if (timeout_s <= 0) timeout_s = config_.default_timeout_s;

  Dispatchable d;
  d.kind = DispatchableKind::kObligation;
  d.id = robot_id_ + ":" + std::to_string(next_id_++);
  d.requester = robot_id_;
  d.task_id = task_id;
  d.payload_bits = payload_bits;
  d.created_at_s = now;
  d.ttl_s = ttl_s;
  d.chained = chain;
  pending_[d.id] = {task_id, now, now + timeout_s};
  ++counters_.submitted;
  std::string id = d.id;
  forward(std::move(d), now);
  return id;
}

RouteAction Dispatcher::forwarder_route(const Dispatchable& d, double now) const {
  if (d.expired(now)) return {RouteKind::kDrop, {}};
  if (!d.is_obligation()) return {RouteKind::kSend, d.requester};
  auto target = table_.lookup(d.task_id);
  if (!target || *target == robot_id_) return {RouteKind::kExecuteLocal, {}};
  if (*target == kSkip) return {RouteKind::kFailToAcceptor, {}};
  return {RouteKind::kSend, *target};
}

void Dispatcher::forward(Dispatchable d, double now) {
  RouteAction action = forwarder_route(d, now);
  switch (action.kind) {
    case RouteKind::kDrop:
      ++counters_.dropped_expired;
      return;
    case RouteKind::kExecuteLocal:
      ++counters_.executed_local;
      backend_.push_back(std::move(d));
      return;
    case RouteKind::kSend:
      if (d.is_obligation()) ++counters_.obligations_sent;
      else ++counters_.results_sent;
      outbox_.push_back({std::move(d), action.destination});
      return;
    case RouteKind::kFailToAcceptor: {
      ++counters_.failures_skip;
      Dispatchable failure;
      failure.kind = DispatchableKind::kResult;
      failure.id = d.id;
      failure.requester = d.requester;
      failure.task_id = d.task_id;
      failure.created_at_s = now;
      failure.ttl_s = d.ttl_s;
      failure.success = false;
      failure.producer = robot_id_;
      acceptor_ingest(std::move(failure), now, false);
      return;
    }
  }
}

void Dispatcher::acceptor_ingest(Dispatchable d, double now, bool from_network) {
  if (d.id.empty() || d.task_id.empty() || d.requester.empty() || !(d.ttl_s > 0)) {
    ++counters_.dropped_malformed;
    return;
  }
  if (d.expired(now)) {
    ++counters_.dropped_expired;
    return;
  }
  if (d.is_obligation()) {
    if (from_network) {
      ++counters_.obligations_received;
      if (forwarder_route(d, now).kind == RouteKind::kSend) ++counters_.forwarded_on;
    }
    forward(std::move(d), now);
    return;
  }
  if (from_network) ++counters_.results_received;
  if (d.success && !d.chained.empty()) {
    ++counters_.chain_expansions;
    Dispatchable next;
    next.kind = DispatchableKind::kObligation;
    next.id = successor_id(d.id);
    next.requester = d.requester;
    next.task_id = d.chained.front();
    next.payload_bits = d.payload_bits;
    next.created_at_s = now;
    next.ttl_s = d.ttl_s;
    next.chained.assign(d.chained.begin() + 1, d.chained.end());
    forward(std::move(next), now);
    return;
  }
  if (d.requester == robot_id_) {
    deliver(d, now);
  } else {
    forward(std::move(d), now);
  }
}

bool Dispatcher::remember(const std::string& id) {
  if (!seen_.insert(id).second) return false;
  seen_order_.push_back(id);
  while (seen_order_.size() > config_.seen_capacity) {
    seen_.erase(seen_order_.front());
    seen_order_.pop_front();
  }
  return true;
}

void Dispatcher::deliver(const Dispatchable& result, double now) {
  if (!remember(result.id)) {
    ++counters_.duplicates;
    return;
  }
  auto it = pending_.find(root_dispatch_id(result.id));
  if (it == pending_.end()) {
    ++counters_.late_results;
    return;
  }
  outcomes_.push_back({it->first, it->second.task_id, result.success, false, result.producer,
                       it->second.submitted_at, now});
  pending_.erase(it);
}

void Dispatcher::backend_complete(const Dispatchable& obligation, bool success,
                                  double product_bits, double now) {
  Dispatchable r;
  r.kind = DispatchableKind::kResult;
  r.id = obligation.id;
  r.requester = obligation.requester;
  r.task_id = obligation.task_id;
  r.payload_bits = success ? product_bits : 0.0;
  r.created_at_s = now;
  r.ttl_s = obligation.ttl_s;
  if (success) r.chained = obligation.chained;
  r.success = success;
  r.producer = robot_id_;
  acceptor_ingest(std::move(r), now, false);
}

int Dispatcher::expire_timeouts(double now) {
  int n = 0;
  for (auto it = pending_.begin(); it != pending_.end();) {
    if (it->second.deadline <= now) {
      outcomes_.push_back({it->first, it->second.task_id, false, true, robot_id_,
                           it->second.submitted_at, now});
      it = pending_.erase(it);
      ++counters_.timeouts;
      ++n;
    } else {
      ++it;
    }
  }
  return n;
}

double Dispatcher::next_timeout() const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& [id, p] : pending_) t = std::min(t, p.deadline);
  return t;
}

int Dispatcher::ttl_sweep(double now) {
  int n = 0;
  auto expired_out = [&](const OutboundMessage& m) { return m.dispatchable.expired(now); };
  auto expired_job = [&](const Dispatchable& d) { return d.expired(now); };
  n += static_cast<int>(std::count_if(outbox_.begin(), outbox_.end(), expired_out));
  n += static_cast<int>(std::count_if(backend_.begin(), backend_.end(), expired_job));
  std::erase_if(outbox_, expired_out);
  std::erase_if(backend_, expired_job);
  counters_.dropped_expired += n;
  return n;
}

double Dispatcher::max_overdue(double now) const {
  double worst = 0.0;
  for (const auto& m : outbox_) worst = std::max(worst, now - m.dispatchable.expires_at());
  for (const auto& d : backend_) worst = std::max(worst, now - d.expires_at());
  return worst;
}

std::vector<OutboundMessage> Dispatcher::take_outbox() {
  std::vector<OutboundMessage> out(std::make_move_iterator(outbox_.begin()),
                                   std::make_move_iterator(outbox_.end()));
  outbox_.clear();
  return out;
}

std::vector<Dispatchable> Dispatcher::take_backend_jobs() {
  std::vector<Dispatchable> out(std::make_move_iterator(backend_.begin()),
                                std::make_move_iterator(backend_.end()));
  backend_.clear();
  return out;
}

std::vector<Outcome> Dispatcher::take_outcomes() {
  std::vector<Outcome> out;
  out.swap(outcomes_);
  return out;
}

}  // namespace pdra::dispatch
