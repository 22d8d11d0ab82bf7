#pragma once

#include <string>

#include <json.hpp>
#include "pdra/model/types.hpp"

namespace pdra {

using Json = nlohmann::ordered_json;

Json scenario_to_json(const ScenarioSpec& spec);
// Throws Error when the document is malformed or the schema version is missing/unsupported.
ScenarioSpec scenario_from_json(const Json& doc);

ScenarioSpec load_scenario(const std::string& path);
void save_scenario(const ScenarioSpec& spec, const std::string& path);

// Canonical wire form: fixed field order, sizes in bits, content-free payload.
Json dispatchable_to_json(const Dispatchable& d);
Dispatchable dispatchable_from_json(const Json& doc);
std::string encode_dispatchable(const Dispatchable& d);
Dispatchable decode_dispatchable(const std::string& text);

Json table_to_json(const AllocationTable& table);

const char* to_string(SampleStage stage);
SampleStage sample_stage_from_string(const std::string& s);

}  // namespace pdra
