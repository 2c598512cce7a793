#ifndef AGGRE_H
#define AGGRE_H

#include <stddef.h>
#include <stdint.h>

#if defined(AGGRE_BUILDING_LIBRARY)
#define AGGRE_API __attribute__((visibility("default")))
#else
#define AGGRE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aggre_status {
  AGGRE_OK = 0,
  AGGRE_E_INVALID_ARGUMENT = 1,
  AGGRE_E_NUMERIC = 2,
  AGGRE_E_CFL = 3,
  AGGRE_E_INVARIANT = 4,
  AGGRE_E_SCHEMA = 5,
  AGGRE_E_HYPOTHESIS = 6,
  AGGRE_E_IO = 7,
  AGGRE_E_INTERNAL = 8
} aggre_status;

typedef enum aggre_mode { AGGRE_MODE_PLAIN = 0, AGGRE_MODE_RESCALED = 1 } aggre_mode;

typedef struct aggre_scenario aggre_scenario;
typedef struct aggre_result aggre_result;

/* Message of the last failing call on this thread; never NULL. */
AGGRE_API const char* aggre_last_error(void);
AGGRE_API const char* aggre_status_name(aggre_status status);

/* Scenarios. Overrides re-run the hypothesis and CFL validation. */
AGGRE_API aggre_status aggre_scenario_load(const char* path, aggre_scenario** out);
AGGRE_API aggre_status aggre_scenario_parse(const char* json_text, const char* name, aggre_scenario** out);
AGGRE_API void aggre_scenario_free(aggre_scenario* sc);
AGGRE_API const char* aggre_scenario_name(const aggre_scenario* sc);
AGGRE_API const char* aggre_scenario_directory(const aggre_scenario* sc);
AGGRE_API uint64_t aggre_scenario_seed(const aggre_scenario* sc);
AGGRE_API aggre_status aggre_scenario_set_t_end(aggre_scenario* sc, double t_end);
AGGRE_API aggre_status aggre_scenario_set_dt(aggre_scenario* sc, double dt);
AGGRE_API aggre_status aggre_scenario_set_mode(aggre_scenario* sc, aggre_mode mode);
AGGRE_API aggre_status aggre_scenario_set_eps(aggre_scenario* sc, double eps);
AGGRE_API aggre_status aggre_scenario_set_seed(aggre_scenario* sc, uint64_t seed);

/* Commands. Each writes its artifacts plus summary.json into out_dir and
   returns a result handle; AGGRE_OK means the command ran, not that it passed. */
AGGRE_API aggre_status aggre_cmd_run(const aggre_scenario* sc, const char* out_dir, aggre_result** out);
AGGRE_API aggre_status aggre_cmd_asymptotics(const aggre_scenario* sc, const char* out_dir, aggre_result** out);
AGGRE_API aggre_status aggre_cmd_oracle_check(const aggre_scenario* sc, const char* out_dir, aggre_result** out);
AGGRE_API aggre_status aggre_cmd_probe(uint64_t seed, size_t samples, const char* out_dir, aggre_result** out);
AGGRE_API void aggre_result_free(aggre_result* r);

/* 1 when every enforced invariant held. */
AGGRE_API int aggre_result_invariants_ok(const aggre_result* r);
/* Name of the breached invariant, "" when none. */
AGGRE_API const char* aggre_result_failed_invariant(const aggre_result* r);
AGGRE_API size_t aggre_result_check_count(const aggre_result* r);
/* Check i: name, measured value, limit and pass flag; returns AGGRE_E_INVALID_ARGUMENT out of range. */
AGGRE_API aggre_status aggre_result_check(const aggre_result* r, size_t i, const char** name, double* value,
                                          double* limit, int* passed);
/* 0 pass, 1 failure; checks count only when check_mode is nonzero. */
AGGRE_API int aggre_result_exit_code(const aggre_result* r, int check_mode);

/* Writes failure.json naming each failed invariant or check (exit code 1). */
AGGRE_API aggre_status aggre_result_write_failure(const aggre_result* r, const char* out_dir, int check_mode);

/* Writes failure.json (machine-readable) for a command that could not run. */
AGGRE_API aggre_status aggre_write_error_report(const char* out_dir, const char* command, aggre_status status,
                                                const char* message);

#ifdef __cplusplus
}
#endif

#endif
