#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "normsim/norm.hpp"
#include "normsim/runtime.hpp"

namespace normsim {

struct AgentSpec {
  AgentId id;
  std::set<RoleId> roles;
  std::string behavior;  // key into the behavior registry
  Bindings params;
};

struct OrganizationSpec {
  std::string name;
  EngineMode mode = EngineMode::Prohibition;
  std::set<RoleId> roles;
  StateSchema schema;
  std::vector<Norm> norms;
  std::map<std::string, DomainId> actions;
};

// Taxi-rank world: one station draws customer groups, drivers queue to
// serve them. Scripted arrivals run first; afterwards group sizes come
// from a splitmix64 stream when random_arrivals is set.
struct TaxiWorldConfig {
  double reward_per_customer = 2.0;
  std::vector<std::uint64_t> scripted_arrivals;
  bool random_arrivals = true;
};

// Scenario file layout (JSON):
//   {
//     "name": string,
//     "ticks": unsigned, "seed": unsigned,
//     "organization": {
//       "name": string, "mode": "prohibition" | "permission",
//       "roles": [string, ...],
//       "schema": ..., "norms": [...], "actions": {...}   norm-file layout
//     },
//     "world": {
//       "kind": "taxi",
//       "reward_per_customer": number,
//       "arrivals": [unsigned, ...],
//       "random_arrivals": bool
//     },
//     "agents": [
//       {"id": string, "roles": [string, ...], "behavior": string,
//        "params": {name: bool | number | string, ...}}, ...
//     ]
//   }
// Keys starting with "_" are ignored; other unknown keys are errors.
struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t ticks = 100;
  std::uint64_t seed = 0;
  OrganizationSpec org;
  TaxiWorldConfig world;
  std::vector<AgentSpec> agents;
};

// Throws IoError / FormatError / ValidationError like the norm-file loader.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& origin);

struct AgentCounters {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  std::uint64_t abstentions = 0;
};

struct SimulationResult {
  std::string name;
  std::uint64_t ticks = 0;
  std::uint64_t seed = 0;
  std::vector<EventRecord> events;
  std::map<AgentId, double> utility;
  std::map<std::string, std::uint64_t> norm_violations;
  std::map<AgentId, AgentCounters> counters;
};

// Single JSON object: name, ticks, seed, events, utility, norm_violations,
// counters.
std::string to_summary_json(const SimulationResult& result);

// Runs the scenario on a fresh runtime. on_event, when set, observes each
// record as it is produced, in order.
SimulationResult run_simulation(
    const ScenarioConfig& config,
    const std::function<void(const EventRecord&)>& on_event = {});

}  // namespace normsim
