#include "pdra/world/worldview.hpp"

#include <algorithm>
#include <sstream>

namespace pdra::world {

Json status_to_json(const StatusMessage& m) {
  Json links = Json::object();
  for (const auto& [n, bps] : m.observed_link_throughputs) links[n] = bps;
  return Json{{"schema", kStatusSchemaVersion},
              {"origin", m.origin},
              {"seq", m.sequence_number},
              {"ts", m.timestamp_s},
              {"battery", m.battery},
              {"pos", Json::array({m.position.x, m.position.y})},
              {"science", m.science_region},
              {"links", links}};
}

StatusMessage status_from_json(const Json& j) {
  try {
    if (j.at("schema").get<int>() != kStatusSchemaVersion) throw Error("unsupported status schema");
    StatusMessage m;
    m.origin = j.at("origin").get<std::string>();
    m.sequence_number = j.at("seq").get<std::uint64_t>();
    m.timestamp_s = j.at("ts").get<double>();
    m.battery = j.at("battery").get<double>();
    m.position = {j.at("pos").at(0).get<double>(), j.at("pos").at(1).get<double>()};
    m.science_region = j.at("science").get<bool>();
    for (const auto& [n, bps] : j.at("links").items()) m.observed_link_throughputs[n] = bps;
    return m;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed status: ") + e.what());
  }
}

std::string encode_status(const StatusMessage& m) { return status_to_json(m).dump(); }

StatusMessage decode_status(const std::string& text) {
  try {
    return status_from_json(Json::parse(text));
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed status: ") + e.what());
  }
}

WorldView::WorldView(ScenarioSpec base) : base_(std::move(base)) {
  base_links_ = average_link_throughput(base_.contact_plan, base_.planning_period_s);
  derive();
}

MergeResult WorldView::merge_status(const StatusMessage& msg) {
  auto it = latest_.find(msg.origin);
  if (it != latest_.end() && it->second.sequence_number >= msg.sequence_number) return {};
  if (!base_.find_robot(msg.origin)) return {};
  const std::string before = digest();
  latest_[msg.origin] = msg;
  derive();
  return {true, digest() != before};
}

void WorldView::derive() {
  states_ = initial_robot_states(base_);
  for (const auto& [id, m] : latest_) {
    auto& s = states_[id];
    s.battery = m.battery;
    s.position = m.position;
    s.science_region = m.science_region;
  }

  links_ = base_links_;
  // Both endpoints may report the same pair; the newer report wins, ties to the larger id.
  struct Report {
    double timestamp;
    std::string origin;
    double bps;
  };
  std::map<LinkKey, Report> reports;
  for (const auto& [origin, m] : latest_) {
    for (const auto& [neighbor, bps] : m.observed_link_throughputs) {
      LinkKey key = std::minmax(origin, neighbor);
      Report r{m.timestamp_s, origin, bps};
      auto it = reports.find(key);
      if (it == reports.end() || r.timestamp > it->second.timestamp ||
          (r.timestamp == it->second.timestamp && r.origin > it->second.origin)) {
        reports[key] = r;
      }
    }
  }
  for (const auto& [key, r] : reports) {
    for (const LinkKey& directed : {key, LinkKey{key.second, key.first}}) {
      if (!base_links_.count(directed)) continue;
      if (r.bps > 0) links_[directed] = r.bps;
      else links_.erase(directed);
    }
  }
}

ProblemInstance WorldView::problem() const { return make_problem(base_, states_, &links_); }

std::string WorldView::digest() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [id, s] : states_) {
    os << id << ',' << s.battery << ',' << s.position.x << ',' << s.position.y << ','
       << s.science_region << ';';
  }
  for (const auto& [key, bps] : links_) os << key.first << '>' << key.second << ',' << bps << ';';
  return os.str();
}

std::vector<std::pair<std::string, StatusMessage>> Flooder::flood_policy(
    const WorldView& view, const std::vector<std::string>& neighbors, double) {
  std::vector<std::pair<std::string, StatusMessage>> out;
  std::vector<std::string> sorted = neighbors;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& n : sorted) {
    if (n == self_) continue;
    auto& sent = sent_[n];
    for (const auto& [origin, msg] : view.latest()) {
      if (origin == n) continue;
      auto it = sent.find(origin);
      if (it != sent.end() && it->second >= msg.sequence_number) continue;
      sent[origin] = msg.sequence_number;
      out.emplace_back(n, msg);
    }
  }
  return out;
}

bool should_resolve(bool changed_since_last_solve, double last_solve_time, double now,
                    double period_s) {
  return changed_since_last_solve || now - last_solve_time >= period_s;
}

}  // namespace pdra::world
