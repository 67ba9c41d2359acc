#include "normsim/scenario.hpp"

#include "json_common.hpp"
#include "normsim/errors.hpp"
#include "normsim/loader.hpp"
#include "normsim/organization.hpp"
#include "normsim/taxi.hpp"

namespace normsim {

namespace {

using detail::Json;
using detail::reject_unknown_keys;

std::optional<Value> value_from_json(const Json& j) {
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number()) return Value(j.get<double>());
  if (j.is_string()) return Value(j.get<std::string>());
  return std::nullopt;
}

void parse_org_section(const Json& section, const std::string& origin,
                       OrganizationSpec& org,
                       std::vector<std::string>& problems) {
  if (!section.is_object()) {
    problems.push_back("organization: expected an object");
    return;
  }
  reject_unknown_keys(section,
                      {"name", "mode", "roles", "schema", "norms", "actions"},
                      "organization", problems);

  if (section.contains("name") && section["name"].is_string())
    org.name = section["name"].get<std::string>();
  else
    problems.push_back("organization: missing or non-string 'name'");

  if (!section.contains("roles") || !section["roles"].is_array() ||
      section["roles"].empty()) {
    problems.push_back("organization: missing or empty 'roles'");
  } else {
    for (const Json& role : section["roles"]) {
      if (!role.is_string()) {
        problems.push_back("organization: non-string role");
        continue;
      }
      org.roles.insert(RoleId{role.get<std::string>()});
    }
  }

  // The remaining keys form a norm file; reuse its parser wholesale.
  Json norm_file = Json::object();
  for (const char* key : {"mode", "schema", "norms", "actions"})
    if (section.contains(key)) norm_file[key] = section[key];
  try {
    NormFile parsed =
        parse_norm_file(norm_file.dump(), origin + "#organization");
    org.mode = parsed.mode;
    org.schema = parsed.schema;
    org.norms = parsed.store.norms();
    org.actions = parsed.store.regulated_actions();
  } catch (const ValidationError& e) {
    problems.insert(problems.end(), e.diagnostics.begin(),
                    e.diagnostics.end());
    return;
  }

  for (const Norm& norm : org.norms) {
    if (!norm.roles) continue;
    for (const RoleId& role : *norm.roles)
      if (!org.roles.count(role))
        problems.push_back("norm '" + norm.id + "': role '" + role.name +
                           "' is not in the organization's roles");
  }
}

void parse_world_section(const Json& section, TaxiWorldConfig& world,
                         std::vector<std::string>& problems) {
  if (!section.is_object()) {
    problems.push_back("world: expected an object");
    return;
  }
  reject_unknown_keys(
      section, {"kind", "reward_per_customer", "arrivals", "random_arrivals"},
      "world", problems);

  if (!section.contains("kind") || !section["kind"].is_string() ||
      section["kind"].get<std::string>() != "taxi")
    problems.push_back("world: 'kind' must be \"taxi\"");

  if (section.contains("reward_per_customer")) {
    if (section["reward_per_customer"].is_number())
      world.reward_per_customer = section["reward_per_customer"].get<double>();
    else
      problems.push_back("world: non-numeric 'reward_per_customer'");
  }
  if (section.contains("arrivals")) {
    if (!section["arrivals"].is_array()) {
      problems.push_back("world: 'arrivals' must be an array");
    } else {
      for (const Json& n : section["arrivals"]) {
        if (!n.is_number_unsigned()) {
          problems.push_back(
              "world: arrivals must be non-negative integers");
          continue;
        }
        world.scripted_arrivals.push_back(n.get<std::uint64_t>());
      }
    }
  }
  if (section.contains("random_arrivals")) {
    if (section["random_arrivals"].is_boolean())
      world.random_arrivals = section["random_arrivals"].get<bool>();
    else
      problems.push_back("world: 'random_arrivals' must be a bool");
  }
}

void parse_agents_section(const Json& section, const OrganizationSpec& org,
                          std::vector<AgentSpec>& agents,
                          std::vector<std::string>& problems) {
  if (!section.is_array() || section.empty()) {
    problems.push_back("missing or empty 'agents'");
    return;
  }
  std::set<AgentId> seen;
  std::size_t index = 0;
  for (const Json& entry : section) {
    const std::string slot = "agents[" + std::to_string(index) + "]";
    ++index;
    if (!entry.is_object()) {
      problems.push_back(slot + ": expected an object");
      continue;
    }
    reject_unknown_keys(entry, {"id", "roles", "behavior", "params"}, slot,
                        problems);

    AgentSpec spec;
    if (entry.contains("id") && entry["id"].is_string() &&
        !entry["id"].get<std::string>().empty())
      spec.id = entry["id"].get<std::string>();
    else
      problems.push_back(slot + ": missing or empty 'id'");
    if (!spec.id.empty() && !seen.insert(spec.id).second)
      problems.push_back("duplicate agent id '" + spec.id + "'");

    if (entry.contains("roles")) {
      if (!entry["roles"].is_array()) {
        problems.push_back(slot + ": 'roles' must be an array");
      } else {
        for (const Json& role : entry["roles"]) {
          if (!role.is_string()) {
            problems.push_back(slot + ": non-string role");
            continue;
          }
          RoleId r{role.get<std::string>()};
          if (!org.roles.count(r))
            problems.push_back(slot + ": unknown role '" + r.name + "'");
          spec.roles.insert(std::move(r));
        }
      }
    }

    if (entry.contains("behavior") && entry["behavior"].is_string()) {
      spec.behavior = entry["behavior"].get<std::string>();
      if (!is_known_behavior(spec.behavior))
        problems.push_back(slot + ": unknown behavior '" + spec.behavior +
                           "'");
    } else {
      problems.push_back(slot + ": missing or non-string 'behavior'");
    }

    if (entry.contains("params")) {
      if (!entry["params"].is_object()) {
        problems.push_back(slot + ": 'params' must be an object");
      } else {
        for (const auto& item : entry["params"].items()) {
          auto value = value_from_json(item.value());
          if (!value) {
            problems.push_back(slot + ": param '" + item.key() +
                               "' must be a bool, number or string");
            continue;
          }
          spec.params.insert_or_assign(item.key(), std::move(*value));
        }
      }
    }

    if (spec.behavior == "taxi_driver") {
      auto cap = spec.params.find("capacity");
      if (cap != spec.params.end() && !cap->second.is_number())
        problems.push_back(slot + ": 'capacity' must be a number");
      auto greedy = spec.params.find("greedy");
      if (greedy != spec.params.end() && !greedy->second.is_boolean())
        problems.push_back(slot + ": 'greedy' must be a bool");
    }

    agents.push_back(std::move(spec));
  }
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
  return parse_scenario(read_text_file(path), path);
}

ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& origin) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(origin + ": " + e.what());
  }

  std::vector<std::string> problems;
  if (!root.is_object())
    throw ValidationError("invalid scenario: " + origin,
                          {origin + ": top level must be an object"});
  reject_unknown_keys(
      root, {"name", "ticks", "seed", "organization", "world", "agents"},
      origin, problems);

  ScenarioConfig config;
  if (root.contains("name")) {
    if (root["name"].is_string())
      config.name = root["name"].get<std::string>();
    else
      problems.push_back("non-string 'name'");
  }
  if (root.contains("ticks")) {
    if (root["ticks"].is_number_unsigned())
      config.ticks = root["ticks"].get<std::uint64_t>();
    else
      problems.push_back("'ticks' must be a non-negative integer");
  }
  if (root.contains("seed")) {
    if (root["seed"].is_number_unsigned())
      config.seed = root["seed"].get<std::uint64_t>();
    else
      problems.push_back("'seed' must be a non-negative integer");
  }

  if (root.contains("organization"))
    parse_org_section(root["organization"], origin, config.org, problems);
  else
    problems.push_back("missing 'organization'");

  if (root.contains("world"))
    parse_world_section(root["world"], config.world, problems);
  else
    problems.push_back("missing 'world'");

  if (root.contains("agents"))
    parse_agents_section(root["agents"], config.org, config.agents, problems);
  else
    problems.push_back("missing 'agents'");

  if (!problems.empty())
    throw ValidationError("invalid scenario: " + origin, std::move(problems));
  return config;
}

std::string to_summary_json(const SimulationResult& result) {
  Json j;
  j["name"] = result.name;
  j["ticks"] = result.ticks;
  j["seed"] = result.seed;
  j["events"] = result.events.size();
  Json utility = Json::object();
  for (const auto& [agent, value] : result.utility) utility[agent] = value;
  j["utility"] = std::move(utility);
  Json violations = Json::object();
  for (const auto& [norm, count] : result.norm_violations)
    violations[norm] = count;
  j["norm_violations"] = std::move(violations);
  Json counters = Json::object();
  for (const auto& [agent, c] : result.counters)
    counters[agent] = Json{{"checks", c.checks},
                           {"violations", c.violations},
                           {"abstentions", c.abstentions}};
  j["counters"] = std::move(counters);
  return j.dump();
}

SimulationResult run_simulation(
    const ScenarioConfig& config,
    const std::function<void(const EventRecord&)>& on_event) {
  Runtime runtime;

  auto org = Organization::create(config.org.name, config.org.mode,
                                  config.org.roles, config.org.schema);
  for (const Norm& norm : config.org.norms) org->add_norm(norm);
  for (const auto& [name, domain] : config.org.actions)
    org->register_action(name, domain);

  auto world =
      std::make_shared<TaxiWorld>(runtime, config.world, config.seed);
  register_taxi_effects(runtime, world);

  for (const AgentSpec& spec : config.agents) {
    runtime.spawn_agent(spec.id, make_behaviors(spec.behavior, world, spec),
                        org->join(spec.id, spec.roles));
    if (spec.behavior == "taxi_driver") {
      double capacity = 4.0;
      bool greedy = false;
      auto cap = spec.params.find("capacity");
      if (cap != spec.params.end() && cap->second.is_number())
        capacity = cap->second.as_number();
      auto greedy_it = spec.params.find("greedy");
      if (greedy_it != spec.params.end() && greedy_it->second.is_boolean())
        greedy = greedy_it->second.as_boolean();
      world->add_driver(spec.id, capacity, greedy);
    }
  }
  world->sync_all();

  SimulationResult result;
  result.name = config.name;
  result.ticks = config.ticks;
  result.seed = config.seed;

  for (std::uint64_t t = 0; t < config.ticks; ++t) {
    const std::vector<EventRecord> records = runtime.tick();
    if (on_event)
      for (const EventRecord& record : records) on_event(record);
  }

  result.events = runtime.event_log();
  result.utility = runtime.environment().utility_accounts();
  result.norm_violations = runtime.environment().violation_counts();
  for (const AgentSpec& spec : config.agents) {
    const Agent* agent = runtime.find_agent(spec.id);
    const NormativeBackpack& backpack = agent->backpack();
    result.counters[spec.id] = AgentCounters{
        backpack.checks(), backpack.violations(), backpack.abstentions()};
  }
  return result;
}

}  // namespace normsim
