#include "pdra/supervise/service.hpp"

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <future>
#include <list>
#include <mutex>
#include <thread>

namespace pdra::supervise {
namespace {

using Clock = std::chrono::steady_clock;

Json rejection(const std::string& code, const std::string& message, const Json& request_id) {
  Json r{{"schema", kProtocolSchema},
         {"accepted", false},
         {"error", {{"code", code}, {"message", message}}}};
  if (!request_id.is_null()) r["request_id"] = request_id;
  return r;
}

bool finite_number(const Json& j) { return j.is_number() && std::isfinite(j.get<double>()); }

}  // namespace

std::string validate_command(const Json& c, const ScenarioSpec& spec) {
  if (!c.is_object()) return "malformed: command must be a JSON object";
  if (!c.contains("kind") || !c["kind"].is_string()) return "malformed: missing string 'kind'";
  const std::string kind = c["kind"];
  auto need_robot = [&]() -> std::string {
    if (!c.contains("robot_id") || !c["robot_id"].is_string())
      return "malformed: missing string 'robot_id'";
    if (!spec.find_robot(c["robot_id"].get<std::string>()))
      return "unknown_robot: no robot '" + c["robot_id"].get<std::string>() + "'";
    return "";
  };
  const Json payload = c.value("payload", Json());
  if (kind == "move_robot") {
    if (auto e = need_robot(); !e.empty()) return e;
    if (!payload.is_object() || !payload.contains("x") || !payload.contains("y") ||
        !finite_number(payload["x"]) || !finite_number(payload["y"]))
      return "malformed: move_robot payload must be {\"x\": number, \"y\": number}";
    const double x = payload["x"], y = payload["y"];
    const Arena& a = spec.arena;
    if (x < a.min.x || x > a.max.x || y < a.min.y || y > a.max.y)
      return "out_of_range: position outside the arena";
    return "";
  }
  if (kind == "set_battery") {
    if (auto e = need_robot(); !e.empty()) return e;
    if (!finite_number(payload)) return "malformed: set_battery payload must be a number";
    const double b = payload;
    if (b < 0.0 || b > 1.0) return "out_of_range: battery must lie in [0, 1]";
    return "";
  }
  if (kind == "set_speed") {
    if (!finite_number(payload)) return "malformed: set_speed payload must be a number";
    if (payload.get<double>() < 0.0) return "out_of_range: speed must be nonnegative";
    return "";
  }
  if (kind == "pause" || kind == "resume") return "";
  return "unknown_kind: '" + kind + "' is not a command";
}

struct Service::Impl {
  struct Client {
    std::deque<std::string> lines;
    long dropped = 0;
    bool closed = false;
  };
  struct Pending {
    Json body;
    std::promise<Json> reply;
  };

  ServiceOptions opt;
  ScenarioSpec spec;  // static facts for validation; the simulation owns the live copy
  sim::Simulation sim;
  httplib::Server server;
  std::thread loop_thread, http_thread;
  int port = -1;

  mutable std::mutex mu;  // guards everything below
  std::condition_variable events_cv;
  std::condition_variable stop_cv;
  std::deque<std::unique_ptr<Pending>> commands;
  std::list<std::shared_ptr<Client>> clients;
  Json cached_snapshot;
  bool paused = false;
  double speed;
  bool stopping = false;
  bool done = false;

  Impl(ScenarioSpec scenario, sim::RunOptions run, ServiceOptions options)
      : opt(std::move(options)), spec(scenario), sim(std::move(scenario), run),
        speed(opt.real_time_factor) {
    sim.set_event_sink([this](const sim::SimEvent& e) { publish(e); });
    cached_snapshot = decorate(sim.snapshot());
    routes();
  }

  // Called on the loop thread while mu is not held.
  void publish(const sim::SimEvent& e) {
    Json line{{"schema", kProtocolSchema}, {"kind", e.kind}, {"t", e.time_s}, {"body", e.body}};
    std::string text = line.dump();
    std::lock_guard lock(mu);
    for (auto& c : clients) push(*c, text);
    events_cv.notify_all();
  }

  void push(Client& c, std::string text) {
    if (c.lines.size() >= opt.client_buffer) {
      c.lines.pop_front();
      ++c.dropped;
    }
    c.lines.push_back(std::move(text));
  }

  Json decorate(Json snap) const {
    snap["paused"] = paused;
    snap["real_time_factor"] = speed;
    snap["finished"] = sim.now() >= sim.duration();
    return snap;
  }

  Json apply(const Json& c) {
    const Json rid = c.value("request_id", Json());
    const std::string kind = c["kind"];
    try {
      if (kind == "move_robot") {
        sim.move_robot(c["robot_id"], {c["payload"]["x"], c["payload"]["y"]});
      } else if (kind == "set_battery") {
        sim.set_battery(c["robot_id"], c["payload"].get<double>());
      } else if (kind == "set_speed") {
        std::lock_guard lock(mu);
        speed = c["payload"];
      } else if (kind == "pause" || kind == "resume") {
        std::lock_guard lock(mu);
        paused = kind == "pause";
      }
    } catch (const Error& e) {
      return rejection("rejected", e.what(), rid);
    }
    Json ok{{"schema", kProtocolSchema}, {"accepted", true}, {"applied_at_s", sim.now()}};
    if (!rid.is_null()) ok["request_id"] = rid;
    return ok;
  }

  void loop() {
    auto wall = Clock::now();
    const auto slice = std::chrono::duration<double>(opt.slice_wall_s);
    for (;;) {
      std::deque<std::unique_ptr<Pending>> batch;
      bool is_paused;
      double factor;
      {
        std::unique_lock lock(mu);
        if (stopping) break;
        batch.swap(commands);
        is_paused = paused;
        factor = speed;
      }
      // Boundary: queued commands take effect before time advances again.
      for (auto& p : batch) p->reply.set_value(apply(p->body));
      {
        std::lock_guard lock(mu);
        is_paused = paused;
        factor = speed;
      }
      const auto now = Clock::now();
      const double elapsed = std::chrono::duration<double>(now - wall).count();
      wall = now;
      if (!is_paused && sim.now() < sim.duration()) {
        const double step = factor > 0 ? factor * elapsed : sim.duration();
        sim.run_until(std::min(sim.duration(), sim.now() + step));
      }
      Json snap = sim.snapshot();
      {
        std::lock_guard lock(mu);
        cached_snapshot = decorate(std::move(snap));
        done = sim.now() >= sim.duration();
      }
      std::unique_lock lock(mu);
      stop_cv.wait_for(lock, slice, [this] { return stopping || !commands.empty(); });
    }
    std::lock_guard lock(mu);
    for (auto& p : commands) p->reply.set_value(rejection("stopping", "service is shutting down", {}));
    commands.clear();
  }

  Json enqueue(const Json& body) {
    const Json rid = body.is_object() ? body.value("request_id", Json()) : Json();
    if (auto err = validate_command(body, spec); !err.empty()) {
      const auto colon = err.find(':');
      return rejection(err.substr(0, colon), err.substr(colon + 2), rid);
    }
    auto p = std::make_unique<Pending>();
    p->body = body;
    auto fut = p->reply.get_future();
    {
      std::lock_guard lock(mu);
      if (stopping || !loop_thread.joinable())
        return rejection("not_running", "simulation loop is not running", rid);
      commands.push_back(std::move(p));
    }
    stop_cv.notify_all();
    if (fut.wait_for(std::chrono::seconds(10)) != std::future_status::ready)
      return rejection("timeout", "simulation loop did not reach a boundary", rid);
    return fut.get();
  }

  void routes() {
    server.Get("/snapshot", [this](const httplib::Request&, httplib::Response& res) {
      Json snap;
      {
        std::lock_guard lock(mu);
        snap = cached_snapshot;
      }
      res.set_content(snap.dump(), "application/json");
    });
    server.Post("/command", [this](const httplib::Request& req, httplib::Response& res) {
      Json body = Json::parse(req.body, nullptr, false);
      Json reply = body.is_discarded()
                       ? rejection("malformed", "request body is not valid JSON", {})
                       : enqueue(body);
      res.status = reply["accepted"].get<bool>() ? 200 : 400;
      res.set_content(reply.dump(), "application/json");
    });
    server.Get("/events", [this](const httplib::Request&, httplib::Response& res) {
      auto client = std::make_shared<Client>();
      {
        std::lock_guard lock(mu);
        push(*client, Json{{"schema", kProtocolSchema},
                           {"kind", "hello"},
                           {"t", cached_snapshot.value("time_s", 0.0)},
                           {"body", {{"buffer", opt.client_buffer}}}}
                          .dump());
        clients.push_back(client);
      }
      res.set_chunked_content_provider(
          "application/x-ndjson",
          [this, client](size_t, httplib::DataSink& sink) {
            std::vector<std::string> out;
            {
              std::unique_lock lock(mu);
              events_cv.wait_for(lock, std::chrono::milliseconds(200), [&] {
                return stopping || !client->lines.empty() || client->dropped > 0;
              });
              if (stopping) return false;
              if (client->dropped > 0) {
                const double t = client->lines.empty()
                                     ? cached_snapshot.value("time_s", 0.0)
                                     : Json::parse(client->lines.front()).value("t", 0.0);
                out.push_back(Json{{"schema", kProtocolSchema},
                                   {"kind", "gap"},
                                   {"t", t},
                                   {"body", {{"dropped", client->dropped}}}}
                                  .dump());
                client->dropped = 0;
              }
              for (auto& l : client->lines) out.push_back(std::move(l));
              client->lines.clear();
            }
            for (const auto& l : out) {
              const std::string line = l + "\n";
              if (!sink.write(line.data(), line.size())) return false;
            }
            return true;
          },
          [this, client](bool) {
            std::lock_guard lock(mu);
            clients.remove(client);
          });
    });
  }
};

Service::Service(ScenarioSpec scenario, sim::RunOptions run, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(scenario), run, std::move(options))) {}

Service::~Service() { stop(); }

int Service::start() {
  auto& m = *impl_;
  if (m.port >= 0) return m.port;
  if (m.opt.port == 0) {
    m.port = m.server.bind_to_any_port(m.opt.host);
  } else {
    m.port = m.server.bind_to_port(m.opt.host, m.opt.port) ? m.opt.port : -1;
  }
  if (m.port < 0) throw Error("cannot bind " + m.opt.host + ":" + std::to_string(m.opt.port));
  m.loop_thread = std::thread([&m] { m.loop(); });
  m.http_thread = std::thread([&m] { m.server.listen_after_bind(); });
  return m.port;
}

void Service::stop() {
  auto& m = *impl_;
  {
    std::lock_guard lock(m.mu);
    m.stopping = true;
  }
  m.stop_cv.notify_all();
  m.events_cv.notify_all();
  m.server.stop();
  if (m.http_thread.joinable()) m.http_thread.join();
  if (m.loop_thread.joinable()) m.loop_thread.join();
}

void Service::wait() {
  auto& m = *impl_;
  std::unique_lock lock(m.mu);
  m.stop_cv.wait(lock, [&m] { return m.stopping; });
}

Json Service::snapshot() const {
  std::lock_guard lock(impl_->mu);
  return impl_->cached_snapshot;
}

Json Service::command(const Json& body) { return impl_->enqueue(body); }

bool Service::finished() const {
  std::lock_guard lock(impl_->mu);
  return impl_->done;
}

}  // namespace pdra::supervise
