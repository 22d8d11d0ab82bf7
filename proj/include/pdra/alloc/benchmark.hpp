#pragma once

#include <cstdint>

#include "pdra/model/problem.hpp"
#include "pdra/model/types.hpp"

namespace pdra {

inline constexpr double kScienceProbability = 0.6;

// Random instance with `n_robots` rovers plus one base station: positions uniform in the arena,
// distance-tier links, every rover owning the housekeeping chain and, with probability 0.6,
// the science chain. Pure function of (seed, n_robots).
ScenarioSpec generate_benchmark_instance(std::uint64_t seed, int n_robots);

// Random problem small enough for brute_force_oracle: 1-3 robots, 1-6 tasks in a forest,
// at most 4 directed links, random costs, coding and latency bounds. Pure function of seed.
ProblemInstance random_tiny_instance(std::uint64_t seed);

}  // namespace pdra
