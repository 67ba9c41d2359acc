#include "normsim.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json_common.hpp"
#include "normsim/engine.hpp"
#include "normsim/errors.hpp"
#include "normsim/loader.hpp"
#include "normsim/scenario.hpp"

struct ns_norms {
  normsim::NormFile file;
};
struct ns_verdict {
  normsim::NormativeResponse response;
};
struct ns_scenario {
  normsim::ScenarioConfig config;
};
struct ns_sim_result {
  normsim::SimulationResult result;
  std::vector<std::string> lines;
  std::string summary;
};

namespace {

using namespace normsim;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** error, const std::string& message) {
  if (error) *error = dup_string(message);
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& line : lines) {
    if (!out.empty()) out += '\n';
    out += line;
  }
  return out;
}

template <typename Fn>
ns_status guarded(char** error, Fn&& fn) {
  if (error) *error = nullptr;
  try {
    fn();
    return NS_OK;
  } catch (const IoError& e) {
    set_error(error, e.what());
    return NS_ERR_IO;
  } catch (const ValidationError& e) {
    std::string message = e.what();
    if (!e.diagnostics.empty()) message += '\n' + join_lines(e.diagnostics);
    set_error(error, message);
    return NS_ERR_VALIDATION;
  } catch (const FormatError& e) {
    set_error(error, e.what());
    return NS_ERR_PARSE;
  } catch (const LexError& e) {
    set_error(error, e.what());
    return NS_ERR_PARSE;
  } catch (const ParseError& e) {
    set_error(error, e.what());
    return NS_ERR_PARSE;
  } catch (const EvaluationError& e) {
    std::string message = e.what();
    if (!e.norm_id.empty()) message = "norm '" + e.norm_id + "': " + message;
    set_error(error, message);
    return NS_ERR_EVAL;
  } catch (const ModeConflictError& e) {
    set_error(error, e.what());
    return NS_ERR_CONFLICT;
  } catch (const DuplicateIdError& e) {
    set_error(error, e.what());
    return NS_ERR_CONFLICT;
  } catch (const DuplicateActionError& e) {
    set_error(error, e.what());
    return NS_ERR_CONFLICT;
  } catch (const std::invalid_argument& e) {
    set_error(error, e.what());
    return NS_ERR_USAGE;
  } catch (const Error& e) {
    set_error(error, e.what());
    return NS_ERR_USAGE;
  } catch (const std::exception& e) {
    set_error(error, e.what());
    return NS_ERR_INTERNAL;
  }
}

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const char* csv) {
  std::vector<std::string> out;
  if (!csv) return out;
  std::string text(csv);
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string item = trim(text.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

Bindings parse_state_csv(const char* csv) {
  Bindings state;
  const EvaluationContext empty_ctx;
  for (const std::string& entry : split_csv(csv)) {
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("state entry '" + entry +
                                  "' must look like name=value");
    std::string key = trim(entry.substr(0, eq));
    std::string value_src = trim(entry.substr(eq + 1));
    ExprPtr expr = parse_source(normalize_bool_literals(value_src));
    state.insert_or_assign(std::move(key), evaluate(*expr, empty_ctx));
  }
  return state;
}

}  // namespace

extern "C" {

const char* ns_version(void) { return "1.0.0"; }

const char* ns_regulatory_status_name(ns_regulatory_status status) {
  switch (status) {
    case NS_NOT_REGULATED: return "NOT_REGULATED";
    case NS_ALLOWED: return "ALLOWED";
    case NS_FORBIDDEN: return "FORBIDDEN";
    case NS_INVIOLABLE: return "INVIOLABLE";
  }
  return "?";
}

void ns_string_free(char* s) { std::free(s); }

ns_status ns_norms_load(const char* path, ns_norms** out, char** error) {
  if (!path || !out) return NS_ERR_USAGE;
  *out = nullptr;
  return guarded(error, [&] { *out = new ns_norms{load_norm_file(path)}; });
}

ns_status ns_norms_load_string(const char* text, const char* origin,
                               ns_norms** out, char** error) {
  if (!text || !out) return NS_ERR_USAGE;
  *out = nullptr;
  return guarded(error, [&] {
    *out = new ns_norms{
        parse_norm_file(text, origin ? origin : "<string>")};
  });
}

void ns_norms_free(ns_norms* norms) { delete norms; }

ns_status ns_validate_file(const char* path, char** diagnostics) {
  if (!path || !diagnostics) return NS_ERR_USAGE;
  *diagnostics = nullptr;
  char* error = nullptr;
  const ns_status status = guarded(&error, [&] {
    const std::string text = read_text_file(path);
    const detail::Json root = detail::Json::parse(text, nullptr, false);
    if (root.is_object() && root.contains("agents"))
      parse_scenario(text, path);
    else
      parse_norm_file(text, path);
  });
  *diagnostics = error;
  return status;
}

ns_status ns_norms_check(const ns_norms* norms, const char* action,
                         const char* domain, const char* roles_csv,
                         const char* state_csv, ns_verdict** out,
                         char** error) {
  if (!norms || !action || !*action || !out) return NS_ERR_USAGE;
  *out = nullptr;
  return guarded(error, [&] {
    ActionDescriptor descriptor;
    descriptor.name = action;
    if (domain && *domain) {
      descriptor.domain = DomainId{domain};
    } else {
      auto it = norms->file.store.regulated_actions().find(action);
      if (it != norms->file.store.regulated_actions().end())
        descriptor.domain = it->second;
    }

    std::set<RoleId> roles;
    for (const std::string& role : split_csv(roles_csv))
      roles.insert(RoleId{role});

    const Bindings state = parse_state_csv(state_csv);
    const EvaluationContext ctx(nullptr, &state, nullptr);
    *out = new ns_verdict{
        check_action(norms->file.store, descriptor, roles, ctx)};
  });
}

ns_regulatory_status ns_verdict_status(const ns_verdict* verdict) {
  if (!verdict) return NS_NOT_REGULATED;
  return static_cast<ns_regulatory_status>(verdict->response.status);
}

double ns_verdict_total_reward(const ns_verdict* verdict) {
  return verdict ? verdict->response.total_reward : 0.0;
}

double ns_verdict_total_penalty(const ns_verdict* verdict) {
  return verdict ? verdict->response.total_penalty : 0.0;
}

size_t ns_verdict_allowing_count(const ns_verdict* verdict) {
  return verdict ? verdict->response.allowing.size() : 0;
}

const char* ns_verdict_allowing_id(const ns_verdict* verdict, size_t index) {
  if (!verdict || index >= verdict->response.allowing.size()) return nullptr;
  return verdict->response.allowing[index].c_str();
}

size_t ns_verdict_forbidding_count(const ns_verdict* verdict) {
  return verdict ? verdict->response.forbidding.size() : 0;
}

const char* ns_verdict_forbidding_id(const ns_verdict* verdict, size_t index) {
  if (!verdict || index >= verdict->response.forbidding.size()) return nullptr;
  return verdict->response.forbidding[index].c_str();
}

void ns_verdict_free(ns_verdict* verdict) { delete verdict; }

ns_status ns_scenario_load(const char* path, ns_scenario** out, char** error) {
  if (!path || !out) return NS_ERR_USAGE;
  *out = nullptr;
  return guarded(error, [&] { *out = new ns_scenario{load_scenario(path)}; });
}

void ns_scenario_set_ticks(ns_scenario* scenario, uint64_t ticks) {
  if (scenario) scenario->config.ticks = ticks;
}

void ns_scenario_set_seed(ns_scenario* scenario, uint64_t seed) {
  if (scenario) scenario->config.seed = seed;
}

void ns_scenario_free(ns_scenario* scenario) { delete scenario; }

ns_status ns_scenario_run(const ns_scenario* scenario, const char* log_path,
                          ns_sim_result** out, char** error) {
  if (!scenario || !out) return NS_ERR_USAGE;
  *out = nullptr;
  return guarded(error, [&] {
    std::ofstream log;
    std::function<void(const EventRecord&)> sink;
    if (log_path) {
      log.open(log_path, std::ios::binary | std::ios::trunc);
      if (!log) throw IoError(std::string("cannot open '") + log_path + "'");
      sink = [&log](const EventRecord& record) {
        log << to_json_line(record) << '\n';
      };
    }

    auto result = std::make_unique<ns_sim_result>();
    result->result = run_simulation(scenario->config, sink);
    if (log_path) {
      log.flush();
      if (!log)
        throw IoError(std::string("write failure on '") + log_path + "'");
    }
    result->lines.reserve(result->result.events.size());
    for (const EventRecord& record : result->result.events)
      result->lines.push_back(to_json_line(record));
    result->summary = to_summary_json(result->result);
    *out = result.release();
  });
}

const char* ns_sim_result_summary_json(const ns_sim_result* result) {
  return result ? result->summary.c_str() : nullptr;
}

size_t ns_sim_result_event_count(const ns_sim_result* result) {
  return result ? result->lines.size() : 0;
}

const char* ns_sim_result_event_line(const ns_sim_result* result,
                                     size_t index) {
  if (!result || index >= result->lines.size()) return nullptr;
  return result->lines[index].c_str();
}

void ns_sim_result_free(ns_sim_result* result) { delete result; }

}  // extern "C"
