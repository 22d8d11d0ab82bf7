#include "pdra/model/json.hpp"

#include <fstream>
#include <sstream>

namespace pdra {
namespace {

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->template get<T>();
}

const Json& require(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(std::string("missing field '") + key + "'");
  return *it;
}

Json vec_to_json(const Vec2& v) { return Json::array({v.x, v.y}); }

Vec2 vec_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("position must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json polygon_to_json(const Polygon& p) {
  Json out = Json::array();
  for (const auto& v : p.vertices) out.push_back(vec_to_json(v));
  return out;
}

Polygon polygon_from_json(const Json& j) {
  Polygon p;
  for (const auto& v : j) p.vertices.push_back(vec_from_json(v));
  return p;
}

Json coding_to_json(const LinkCoding& c) {
  Json j;
  j["encode_load_per_bps"] = c.encode_load_per_bps;
  j["decode_load_per_bps"] = c.decode_load_per_bps;
  j["encode_energy_j_per_bit"] = c.encode_energy_j_per_bit;
  j["decode_energy_j_per_bit"] = c.decode_energy_j_per_bit;
  return j;
}

LinkCoding coding_from_json(const Json& j) {
  LinkCoding c;
  c.encode_load_per_bps = get_or(j, "encode_load_per_bps", 0.0);
  c.decode_load_per_bps = get_or(j, "decode_load_per_bps", 0.0);
  c.encode_energy_j_per_bit = get_or(j, "encode_energy_j_per_bit", 0.0);
  c.decode_energy_j_per_bit = get_or(j, "decode_energy_j_per_bit", 0.0);
  return c;
}

Json number_map(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::map<std::string, double> number_map_from(const Json& j) {
  std::map<std::string, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = it.value().get<double>();
  return m;
}

}  // namespace

const char* to_string(SampleStage stage) {
  switch (stage) {
    case SampleStage::kTake: return "take";
    case SampleStage::kAnalyze: return "analyze";
    case SampleStage::kStore: return "store";
    case SampleStage::kNone: break;
  }
  return "none";
}

SampleStage sample_stage_from_string(const std::string& s) {
  if (s == "none") return SampleStage::kNone;
  if (s == "take") return SampleStage::kTake;
  if (s == "analyze") return SampleStage::kAnalyze;
  if (s == "store") return SampleStage::kStore;
  throw Error("unknown sample stage '" + s + "'");
}

Json scenario_to_json(const ScenarioSpec& spec) {
  Json j;
  j["schema"] = kScenarioSchemaVersion;
  j["name"] = spec.name;
  j["planning_period_s"] = spec.planning_period_s;
  j["alpha"] = spec.alpha;
  j["battery_kappa"] = spec.battery_kappa;
  j["arena"] = {{"min", vec_to_json(spec.arena.min)}, {"max", vec_to_json(spec.arena.max)}};

  Json robots = Json::array();
  for (const auto& r : spec.robots) {
    Json jr;
    jr["robot_id"] = r.robot_id;
    jr["position"] = vec_to_json(r.position);
    jr["battery"] = r.battery;
    jr["max_compute_cores"] = r.max_compute_cores;
    jr["compute_load"] = number_map(r.compute_load);
    jr["power"] = number_map(r.power);
    jr["science_capable"] = r.science_capable;
    jr["base_station"] = r.base_station;
    Json wps = Json::array();
    for (const auto& w : r.waypoints) {
      wps.push_back({{"start_s", w.start_s}, {"end_s", w.end_s},
                     {"position", vec_to_json(w.position)}});
    }
    jr["waypoints"] = wps;
    robots.push_back(jr);
  }
  j["robots"] = robots;

  Json tasks = Json::array();
  for (const auto& t : spec.tasks) {
    Json jt;
    jt["task_id"] = t.task_id;
    jt["owner_robot"] = t.owner_robot;
    jt["required"] = t.required;
    jt["reward"] = t.reward;
    jt["product_size_bits"] = t.product_size_bits;
    jt["children"] = t.children;
    jt["max_latency_s"] = number_map(t.max_latency_s);
    jt["allowed_robots"] = t.allowed_robots;
    jt["sample_stage"] = to_string(t.sample_stage);
    tasks.push_back(jt);
  }
  j["tasks"] = tasks;

  Json windows = Json::array();
  for (const auto& w : spec.contact_plan.windows) {
    windows.push_back({{"from", w.from},
                       {"to", w.to},
                       {"start_s", w.start_s},
                       {"end_s", w.end_s},
                       {"throughput_bps", w.throughput_bps},
                       {"latency_s", w.latency_s}});
  }
  j["contact_plan"] = {{"period_s", spec.contact_plan.period_s}, {"windows", windows}};

  Json tiers = Json::array();
  for (const auto& t : spec.comm_model.tiers)
    tiers.push_back({{"max_distance_m", t.max_distance_m}, {"throughput_bps", t.throughput_bps}});
  j["comm_model"] = {{"tiers", tiers}, {"latency_s", spec.comm_model.latency_s}};

  j["link_coding"] = coding_to_json(spec.link_coding);
  Json overrides = Json::array();
  for (const auto& o : spec.coding_overrides)
    overrides.push_back({{"from", o.from}, {"to", o.to}, {"coding", coding_to_json(o.coding)}});
  j["coding_overrides"] = overrides;

  Json obstacles = Json::array();
  for (const auto& p : spec.obstacles) obstacles.push_back(polygon_to_json(p));
  j["obstacles"] = obstacles;
  Json regions = Json::array();
  for (const auto& p : spec.science_regions) regions.push_back(polygon_to_json(p));
  j["science_regions"] = regions;
  return j;
}

ScenarioSpec scenario_from_json(const Json& j) {
  if (!j.is_object()) throw Error("scenario must be a JSON object");
  auto schema = j.find("schema");
  if (schema == j.end()) throw Error("missing mandatory field 'schema'");
  if (*schema != kScenarioSchemaVersion)
    throw Error("unsupported scenario schema " + schema->dump());
  try {
    ScenarioSpec s;
    s.name = get_or<std::string>(j, "name", "");
    s.planning_period_s = require(j, "planning_period_s").get<double>();
    s.alpha = get_or(j, "alpha", 0.5);
    s.battery_kappa = get_or(j, "battery_kappa", 1.0);
    if (auto a = j.find("arena"); a != j.end()) {
      s.arena.min = vec_from_json(require(*a, "min"));
      s.arena.max = vec_from_json(require(*a, "max"));
    }
    for (const auto& jr : require(j, "robots")) {
      RobotSpec r;
      r.robot_id = require(jr, "robot_id").get<std::string>();
      r.position = vec_from_json(require(jr, "position"));
      r.battery = get_or(jr, "battery", 1.0);
      r.max_compute_cores = require(jr, "max_compute_cores").get<double>();
      if (auto it = jr.find("compute_load"); it != jr.end()) r.compute_load = number_map_from(*it);
      if (auto it = jr.find("power"); it != jr.end()) r.power = number_map_from(*it);
      r.science_capable = get_or(jr, "science_capable", false);
      r.base_station = get_or(jr, "base_station", false);
      if (auto it = jr.find("waypoints"); it != jr.end()) {
        for (const auto& w : *it) {
          r.waypoints.push_back({require(w, "start_s").get<double>(),
                                 require(w, "end_s").get<double>(),
                                 vec_from_json(require(w, "position"))});
        }
      }
      s.robots.push_back(std::move(r));
    }
    for (const auto& jt : require(j, "tasks")) {
      TaskSpec t;
      t.task_id = require(jt, "task_id").get<std::string>();
      t.owner_robot = require(jt, "owner_robot").get<std::string>();
      t.required = get_or(jt, "required", true);
      t.reward = get_or(jt, "reward", 0.0);
      t.product_size_bits = require(jt, "product_size_bits").get<double>();
      t.children = get_or(jt, "children", std::vector<std::string>{});
      if (auto it = jt.find("max_latency_s"); it != jt.end()) t.max_latency_s = number_map_from(*it);
      t.allowed_robots = require(jt, "allowed_robots").get<std::vector<std::string>>();
      t.sample_stage = sample_stage_from_string(get_or<std::string>(jt, "sample_stage", "none"));
      s.tasks.push_back(std::move(t));
    }
    const auto& plan = require(j, "contact_plan");
    s.contact_plan.period_s = require(plan, "period_s").get<double>();
    for (const auto& w : require(plan, "windows")) {
      s.contact_plan.windows.push_back({require(w, "from").get<std::string>(),
                                        require(w, "to").get<std::string>(),
                                        require(w, "start_s").get<double>(),
                                        require(w, "end_s").get<double>(),
                                        require(w, "throughput_bps").get<double>(),
                                        get_or(w, "latency_s", 0.0)});
    }
    if (auto cm = j.find("comm_model"); cm != j.end()) {
      for (const auto& t : require(*cm, "tiers")) {
        s.comm_model.tiers.push_back({require(t, "max_distance_m").get<double>(),
                                      require(t, "throughput_bps").get<double>()});
      }
      s.comm_model.latency_s = get_or(*cm, "latency_s", 0.0);
    }
    if (auto lc = j.find("link_coding"); lc != j.end()) s.link_coding = coding_from_json(*lc);
    if (auto co = j.find("coding_overrides"); co != j.end()) {
      for (const auto& o : *co) {
        s.coding_overrides.push_back({require(o, "from").get<std::string>(),
                                      require(o, "to").get<std::string>(),
                                      coding_from_json(require(o, "coding"))});
      }
    }
    if (auto ob = j.find("obstacles"); ob != j.end()) {
      for (const auto& p : *ob) s.obstacles.push_back(polygon_from_json(p));
    }
    if (auto sr = j.find("science_regions"); sr != j.end()) {
      for (const auto& p : *sr) s.science_regions.push_back(polygon_from_json(p));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed scenario: ") + e.what());
  }
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("scenario " + path + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(doc);
}

void save_scenario(const ScenarioSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << scenario_to_json(spec).dump(2) << '\n';
}

Json dispatchable_to_json(const Dispatchable& d) {
  Json j;
  j["schema"] = kDispatchableSchemaVersion;
  j["kind"] = d.is_obligation() ? "obligation" : "result";
  j["id"] = d.id;
  j["requester"] = d.requester;
  j["task_id"] = d.task_id;
  j["payload_bits"] = d.payload_bits;
  j["created_at_s"] = d.created_at_s;
  j["ttl_s"] = d.ttl_s;
  j["chained"] = d.chained;
  j["success"] = d.success;
  j["producer"] = d.producer;
  return j;
}

Dispatchable dispatchable_from_json(const Json& j) {
  try {
    if (get_or(j, "schema", 0) != kDispatchableSchemaVersion)
      throw Error("unsupported dispatchable schema");
    Dispatchable d;
    auto kind = require(j, "kind").get<std::string>();
    if (kind == "obligation") {
      d.kind = DispatchableKind::kObligation;
    } else if (kind == "result") {
      d.kind = DispatchableKind::kResult;
    } else {
      throw Error("unknown dispatchable kind '" + kind + "'");
    }
    d.id = require(j, "id").get<std::string>();
    d.requester = require(j, "requester").get<std::string>();
    d.task_id = require(j, "task_id").get<std::string>();
    d.payload_bits = require(j, "payload_bits").get<double>();
    d.created_at_s = require(j, "created_at_s").get<double>();
    d.ttl_s = require(j, "ttl_s").get<double>();
    d.chained = require(j, "chained").get<std::vector<std::string>>();
    d.success = require(j, "success").get<bool>();
    d.producer = require(j, "producer").get<std::string>();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed dispatchable: ") + e.what());
  }
}

std::string encode_dispatchable(const Dispatchable& d) { return dispatchable_to_json(d).dump(); }

Dispatchable decode_dispatchable(const std::string& text) {
  try {
    return dispatchable_from_json(Json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed dispatchable: ") + e.what());
  }
}

Json table_to_json(const AllocationTable& table) {
  Json j;
  j["version"] = table.version;
  Json a = Json::object();
  for (const auto& [task, robot] : table.assignment) a[task] = robot;
  j["assignment"] = a;
  return j;
}

}  // namespace pdra
