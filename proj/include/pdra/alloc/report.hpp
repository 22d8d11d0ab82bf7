#pragma once

#include "pdra/alloc/milp.hpp"
#include "pdra/alloc/solution.hpp"
#include "pdra/model/json.hpp"

namespace pdra {

// Value maps keyed by ids: x[task][robot], c["parent->child"]["from->to"], b[task]["from->to"].
// Zero flows are omitted.
Json solution_to_json(const AllocationSolution& sol, const ProblemInstance& problem);

// One entry per row with tag, the ids it refers to, activity, bounds and slack.
Json slack_to_json(const MilpModel& model, const std::vector<RowSlack>& rows);

// Objective-mode label of an alpha value: energy (0), reward (1), otherwise hybrid.
const char* objective_mode(double alpha);

}  // namespace pdra
