// Exercises the shared library through its C header only.
#include <cstdio>
#include <cstring>
#include <string>

#include "aggre/aggre.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      std::fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

int main() {
  const std::string dir = AGGRE_SCENARIO_DIR;
  aggre_scenario* sc = nullptr;

  EXPECT(aggre_scenario_load("/nonexistent.json", &sc) == AGGRE_E_IO);
  EXPECT(std::strlen(aggre_last_error()) > 0);
  EXPECT(aggre_scenario_parse("{\"name\": 1}", "x", &sc) == AGGRE_E_SCHEMA);
  EXPECT(aggre_scenario_load(nullptr, &sc) == AGGRE_E_INVALID_ARGUMENT);
  EXPECT(std::strcmp(aggre_status_name(AGGRE_E_CFL), "cfl") == 0 ||
         std::strlen(aggre_status_name(AGGRE_E_CFL)) > 0);

  EXPECT(aggre_scenario_load((dir + "/small_bump.json").c_str(), &sc) == AGGRE_OK);
  EXPECT(std::strcmp(aggre_scenario_name(sc), "small_bump") == 0);
  EXPECT(aggre_scenario_seed(sc) == 1);
  EXPECT(aggre_scenario_set_dt(sc, 50.0) == AGGRE_E_CFL);
  EXPECT(aggre_scenario_set_dt(sc, 0.01) == AGGRE_OK);
  EXPECT(aggre_scenario_set_t_end(sc, 0.2) == AGGRE_OK);
  EXPECT(aggre_scenario_set_mode(sc, AGGRE_MODE_RESCALED) == AGGRE_OK);

  aggre_result* res = nullptr;
  EXPECT(aggre_cmd_run(sc, "capi_out/run", &res) == AGGRE_OK);
  EXPECT(aggre_result_invariants_ok(res) == 1);
  EXPECT(std::strcmp(aggre_result_failed_invariant(res), "") == 0);
  EXPECT(aggre_result_exit_code(res, 1) == 0);
  const size_t n = aggre_result_check_count(res);
  EXPECT(n > 0);
  const char* name = nullptr;
  double value = 0, limit = 0;
  int passed = 0;
  EXPECT(aggre_result_check(res, 0, &name, &value, &limit, &passed) == AGGRE_OK);
  EXPECT(name != nullptr && passed == 1);
  EXPECT(aggre_result_check(res, n, &name, &value, &limit, &passed) == AGGRE_E_INVALID_ARGUMENT);
  aggre_result_free(res);
  aggre_scenario_free(sc);

  EXPECT(aggre_write_error_report("capi_out/err", "run", AGGRE_E_SCHEMA, "bad") == AGGRE_OK);
  std::FILE* f = std::fopen("capi_out/err/failure.json", "r");
  EXPECT(f != nullptr);
  if (f) std::fclose(f);

  aggre_scenario_free(nullptr);
  aggre_result_free(nullptr);
  std::printf("%s (%d failures)\n", failures ? "FAIL" : "ok", failures);
  return failures ? 1 : 0;
}
