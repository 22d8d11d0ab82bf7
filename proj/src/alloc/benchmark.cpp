#include "pdra/alloc/benchmark.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "pdra/model/catalog.hpp"
#include "pdra/model/scenario.hpp"

namespace pdra {

ScenarioSpec generate_benchmark_instance(std::uint64_t seed, int n_robots) {
  if (n_robots < 1 || n_robots > 32) throw Error("benchmark: n_robots must be in [1, 32]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 80.0);
  std::uniform_real_distribution<double> battery(0.4, 1.0);
  std::bernoulli_distribution science(kScienceProbability);

  ScenarioSpec spec;
  spec.name = "bench-" + std::to_string(seed) + "-" + std::to_string(n_robots);
  spec.planning_period_s = 60.0;
  spec.alpha = 0.5;
  spec.arena = {{0.0, 0.0}, {80.0, 80.0}};
  spec.comm_model = default_comm_model();
  spec.link_coding = default_link_coding();

  RobotSpec base;
  base.robot_id = "base";
  base.position = {coord(rng), coord(rng)};
  base.max_compute_cores = 2.0;
  base.base_station = true;
  spec.robots.push_back(base);
  for (int i = 1; i <= n_robots; ++i) {
    RobotSpec r;
    char id[8];
    std::snprintf(id, sizeof id, "r%02d", i);
    r.robot_id = id;
    r.position = {coord(rng), coord(rng)};
    r.battery = battery(rng);
    r.max_compute_cores = 1.0;
    r.science_capable = science(rng);
    spec.robots.push_back(r);
  }
  for (const auto& r : spec.robots) {
    if (r.base_station) continue;
    add_chain(spec, r.robot_id, housekeeping_chain());
    if (r.science_capable) add_chain(spec, r.robot_id, science_chain());
  }
  assign_profiles(spec);
  spec.contact_plan.period_s = spec.planning_period_s;
  spec.contact_plan = compute_bandwidth_from_positions(spec);
  return spec;
}

ProblemInstance random_tiny_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  ProblemInstance p;
  p.period_s = coin(0.5) ? 60.0 : 10.0;
  const double alphas[] = {0.0, 0.5, 1.0, uni(0.0, 1.0)};
  p.alpha = alphas[pick(0, 3)];
  const int nr = pick(1, 3);
  for (int j = 0; j < nr; ++j) {
    p.robots.push_back("r" + std::to_string(j));
    p.base_station.push_back(j == 0 && nr > 1 && coin(0.5));
    p.max_cores.push_back(p.base_station.back() ? 2.0 : uni(0.8, 1.6));
  }

  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < nr; ++a)
    for (int b = 0; b < nr; ++b)
      if (a != b) pairs.push_back({a, b});
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const int nl = std::min<int>(static_cast<int>(pairs.size()), pick(0, 4));
  std::sort(pairs.begin(), pairs.begin() + nl);
  for (int l = 0; l < nl; ++l) {
    ProblemLink link;
    link.from = pairs[l].first;
    link.to = pairs[l].second;
    link.throughput_bps = uni(100.0, 4000.0);
    link.latency_s = coin(0.5) ? 0.0 : uni(0.0, 0.3);
    if (coin(0.7)) {
      link.coding.encode_load_per_bps = uni(0.0, 2e-4);
      link.coding.decode_load_per_bps = uni(0.0, 2e-4);
      link.coding.encode_energy_j_per_bit = uni(0.0, 2e-3);
      link.coding.decode_energy_j_per_bit = uni(0.0, 2e-3);
    }
    p.links.push_back(link);
  }

  const int nt = pick(1, 6);
  for (int t = 0; t < nt; ++t) {
    ProblemTask task;
    task.id = "t" + std::to_string(t);
    task.owner = pick(0, nr - 1);
    task.required = coin(0.55);
    task.reward = task.required ? 0.0 : uni(0.0, 5.0);
    task.product_bits = uni(50.0, 2000.0);
    std::vector<double> load(nr, 0.0), power(nr, 0.0);
    for (int j = 0; j < nr; ++j) {
      if (j != task.owner && !coin(0.6)) continue;
      task.allowed.push_back(j);
      load[j] = uni(0.05, 0.6);
      power[j] = uni(0.2, 3.0);
    }
    // Occasionally a pinned task the owner cannot run either.
    if (coin(0.01)) {
      task.allowed.clear();
      std::fill(load.begin(), load.end(), 0.0);
      std::fill(power.begin(), power.end(), 0.0);
    }
    p.tasks.push_back(task);
    p.load.push_back(load);
    p.power.push_back(power);
    if (t > 0 && coin(0.6)) {
      const int parent = pick(0, t - 1);
      p.tasks[parent].children.push_back(t);
      p.tasks[parent].child_latency_s.push_back(coin(0.4) ? 1e30 : uni(0.2, 8.0));
    }
  }
  p.finalize();
  return p;
}

}  // namespace pdra
