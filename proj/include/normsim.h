/* C interface to the normative-simulation library. All heap objects are
 * returned through opaque handles and released with the matching _free
 * function. Functions that can fail return ns_status and, when an error
 * out-parameter is given, a malloc'd message to release with
 * ns_string_free. Strings returned as const char* stay owned by their
 * handle and die with it. */
#ifndef NORMSIM_H
#define NORMSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef NS_API
#define NS_API __attribute__((visibility("default")))
#endif

typedef enum ns_status {
  NS_OK = 0,
  NS_ERR_IO = 1,
  NS_ERR_PARSE = 2,
  NS_ERR_VALIDATION = 3,
  NS_ERR_EVAL = 4,
  NS_ERR_CONFLICT = 5,
  NS_ERR_NOT_FOUND = 6,
  NS_ERR_USAGE = 7,
  NS_ERR_INTERNAL = 8
} ns_status;

typedef enum ns_regulatory_status {
  NS_NOT_REGULATED = 0,
  NS_ALLOWED = 1,
  NS_FORBIDDEN = 2,
  NS_INVIOLABLE = 3
} ns_regulatory_status;

typedef struct ns_norms ns_norms;
typedef struct ns_verdict ns_verdict;
typedef struct ns_scenario ns_scenario;
typedef struct ns_sim_result ns_sim_result;

NS_API const char* ns_version(void);
NS_API const char* ns_regulatory_status_name(ns_regulatory_status status);
NS_API void ns_string_free(char* s);

/* Norm files. */
NS_API ns_status ns_norms_load(const char* path, ns_norms** out,
                               char** error);
NS_API ns_status ns_norms_load_string(const char* text, const char* origin,
                                      ns_norms** out, char** error);
NS_API void ns_norms_free(ns_norms* norms);

/* Validates a norm file or a scenario file (recognized by its "agents"
 * key). NS_OK leaves *diagnostics NULL; any failure fills it with one
 * newline-separated problem per line. */
NS_API ns_status ns_validate_file(const char* path, char** diagnostics);

/* Verdict for one action. roles_csv like "DRIVER,STATION"; state_csv like
 * "taxiCapacity=4,onBreak=false", each value an expression evaluated with
 * no ambient state. domain NULL or "" falls back to the action's
 * registered domain. */
NS_API ns_status ns_norms_check(const ns_norms* norms, const char* action,
                                const char* domain, const char* roles_csv,
                                const char* state_csv, ns_verdict** out,
                                char** error);

NS_API ns_regulatory_status ns_verdict_status(const ns_verdict* verdict);
NS_API double ns_verdict_total_reward(const ns_verdict* verdict);
NS_API double ns_verdict_total_penalty(const ns_verdict* verdict);
NS_API size_t ns_verdict_allowing_count(const ns_verdict* verdict);
NS_API const char* ns_verdict_allowing_id(const ns_verdict* verdict,
                                          size_t index);
NS_API size_t ns_verdict_forbidding_count(const ns_verdict* verdict);
NS_API const char* ns_verdict_forbidding_id(const ns_verdict* verdict,
                                            size_t index);
NS_API void ns_verdict_free(ns_verdict* verdict);

/* Scenarios. */
NS_API ns_status ns_scenario_load(const char* path, ns_scenario** out,
                                  char** error);
NS_API void ns_scenario_set_ticks(ns_scenario* scenario, uint64_t ticks);
NS_API void ns_scenario_set_seed(ns_scenario* scenario, uint64_t seed);
NS_API void ns_scenario_free(ns_scenario* scenario);

/* Runs the scenario. log_path, when non-NULL, receives the event log as
 * JSON lines while the simulation runs. */
NS_API ns_status ns_scenario_run(const ns_scenario* scenario,
                                 const char* log_path, ns_sim_result** out,
                                 char** error);

NS_API const char* ns_sim_result_summary_json(const ns_sim_result* result);
NS_API size_t ns_sim_result_event_count(const ns_sim_result* result);
NS_API const char* ns_sim_result_event_line(const ns_sim_result* result,
                                            size_t index);
NS_API void ns_sim_result_free(ns_sim_result* result);

#ifdef __cplusplus
}
#endif

#endif /* NORMSIM_H */
