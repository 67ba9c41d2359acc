#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "normsim.h"

namespace {

void print_error(const char* prefix, const char* message) {
  std::fprintf(stderr, "%s: %s\n", prefix, message ? message : "unknown error");
}

int run_command(const std::string& scenario_path,
                const std::optional<std::uint64_t>& ticks,
                const std::optional<std::uint64_t>& seed,
                std::string log_path) {
  ns_scenario* scenario = nullptr;
  char* error = nullptr;
  if (ns_scenario_load(scenario_path.c_str(), &scenario, &error) != NS_OK) {
    print_error("run", error);
    ns_string_free(error);
    return 1;
  }

  if (ticks) ns_scenario_set_ticks(scenario, *ticks);
  if (seed) ns_scenario_set_seed(scenario, *seed);

  // Environment overrides beat the flags.
  if (const char* env_seed = std::getenv("NORMSIM_SEED")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env_seed, &end, 10);
    if (!*env_seed || (end && *end)) {
      std::fprintf(stderr, "run: NORMSIM_SEED is not an integer: %s\n",
                   env_seed);
      ns_scenario_free(scenario);
      return 1;
    }
    ns_scenario_set_seed(scenario, value);
  }
  if (const char* env_log = std::getenv("NORMSIM_LOG")) log_path = env_log;

  ns_sim_result* result = nullptr;
  const ns_status status = ns_scenario_run(
      scenario, log_path.empty() ? nullptr : log_path.c_str(), &result,
      &error);
  ns_scenario_free(scenario);
  if (status != NS_OK) {
    print_error("run", error);
    ns_string_free(error);
    return 1;
  }

  if (log_path.empty()) {
    const size_t count = ns_sim_result_event_count(result);
    for (size_t i = 0; i < count; ++i)
      std::printf("%s\n", ns_sim_result_event_line(result, i));
  }
  std::fprintf(stderr, "%s\n", ns_sim_result_summary_json(result));
  ns_sim_result_free(result);
  return 0;
}

int check_command(const std::string& norms_path, const std::string& action,
                  const std::string& domain, const std::string& roles,
                  const std::string& state) {
  ns_norms* norms = nullptr;
  char* error = nullptr;
  if (ns_norms_load(norms_path.c_str(), &norms, &error) != NS_OK) {
    print_error("check", error);
    ns_string_free(error);
    return 3;
  }

  ns_verdict* verdict = nullptr;
  const ns_status status = ns_norms_check(
      norms, action.c_str(), domain.empty() ? nullptr : domain.c_str(),
      roles.c_str(), state.c_str(), &verdict, &error);
  ns_norms_free(norms);
  if (status != NS_OK) {
    print_error("check", error);
    ns_string_free(error);
    return 3;
  }

  const ns_regulatory_status rs = ns_verdict_status(verdict);
  std::printf("%s\n", ns_regulatory_status_name(rs));
  if (ns_verdict_allowing_count(verdict) > 0) {
    std::printf("allowing:");
    for (size_t i = 0; i < ns_verdict_allowing_count(verdict); ++i)
      std::printf(" %s", ns_verdict_allowing_id(verdict, i));
    std::printf("\n");
  }
  if (ns_verdict_forbidding_count(verdict) > 0) {
    std::printf("forbidding:");
    for (size_t i = 0; i < ns_verdict_forbidding_count(verdict); ++i)
      std::printf(" %s", ns_verdict_forbidding_id(verdict, i));
    std::printf("\n");
  }
  std::printf("total_reward: %g\n", ns_verdict_total_reward(verdict));
  std::printf("total_penalty: %g\n", ns_verdict_total_penalty(verdict));
  ns_verdict_free(verdict);

  switch (rs) {
    case NS_NOT_REGULATED:
    case NS_ALLOWED:
      return 0;
    case NS_FORBIDDEN:
      return 1;
    case NS_INVIOLABLE:
      return 2;
  }
  return 3;
}

int validate_command(const std::vector<std::string>& paths) {
  int failures = 0;
  for (const std::string& path : paths) {
    char* diagnostics = nullptr;
    if (ns_validate_file(path.c_str(), &diagnostics) == NS_OK) {
      std::printf("%s: OK\n", path.c_str());
    } else {
      if (diagnostics) std::fprintf(stderr, "%s\n", diagnostics);
      ++failures;
    }
    ns_string_free(diagnostics);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm-governed multi-agent simulation"};
  app.set_version_flag("--version", ns_version());
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string scenario_path;
  std::optional<std::uint64_t> ticks;
  std::optional<std::uint64_t> seed;
  std::string log_path;
  run->add_option("--scenario", scenario_path, "Scenario file")->required();
  run->add_option("--ticks", ticks, "Override the scenario's tick count");
  run->add_option("--seed", seed,
                  "Override the arrival-stream seed (NORMSIM_SEED wins)");
  run->add_option("--log", log_path,
                  "Write the event log here instead of stdout (NORMSIM_LOG "
                  "wins)");

  auto* check = app.add_subcommand(
      "check", "Evaluate one action against a norm file");
  std::string norms_path, action, domain, roles, state;
  check->add_option("--norms", norms_path, "Norm file")->required();
  check->add_option("--action", action, "Action name")->required();
  check->add_option("--domain", domain,
                    "Action domain (default: the registered one)");
  check->add_option("--roles", roles, "Agent roles, comma separated");
  check->add_option("--state", state,
                    "State bindings, name=value comma separated");

  auto* validate =
      app.add_subcommand("validate", "Validate a norm or scenario file");
  std::vector<std::string> validate_paths;
  validate->add_option("paths", validate_paths, "Files to validate")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;  // --help / --version
    const bool is_check = argc > 1 && std::string(argv[1]) == "check";
    return is_check ? 3 : code;
  }

  if (run->parsed())
    return run_command(scenario_path, ticks, seed, log_path);
  if (check->parsed())
    return check_command(norms_path, action, domain, roles, state);
  return validate_command(validate_paths);
}
