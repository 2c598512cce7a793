#include "aggre/aggre.h"

#include <exception>
#include <memory>
#include <string>

#include <json.hpp>

#include "aggre/commands.hpp"
#include "aggre/error.hpp"

struct aggre_scenario {
  aggre::Scenario sc;
};

struct aggre_result {
  aggre::CommandResult r;
};

namespace {

thread_local std::string g_last_error;

aggre_status status_of(aggre::ErrorCode c) {
  using aggre::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidArgument: return AGGRE_E_INVALID_ARGUMENT;
    case ErrorCode::Numeric: return AGGRE_E_NUMERIC;
    case ErrorCode::Cfl: return AGGRE_E_CFL;
    case ErrorCode::Invariant: return AGGRE_E_INVARIANT;
    case ErrorCode::Schema: return AGGRE_E_SCHEMA;
    case ErrorCode::Hypothesis: return AGGRE_E_HYPOTHESIS;
    case ErrorCode::Io: return AGGRE_E_IO;
  }
  return AGGRE_E_INTERNAL;
}

// Runs fn, translating exceptions into status codes and the thread-local message.
template <class Fn>
aggre_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return AGGRE_OK;
  } catch (const aggre::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AGGRE_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return AGGRE_E_INTERNAL;
  }
}

aggre_status null_arg(const char* what) {
  g_last_error = std::string(what) + ": null argument";
  return AGGRE_E_INVALID_ARGUMENT;
}

template <class Mutate>
aggre_status override_field(aggre_scenario* sc, Mutate&& m) {
  if (!sc) return null_arg("scenario override");
  return guarded([&] {
    aggre::Scenario next = sc->sc;
    m(next);
    aggre::validate_scenario(next);
    sc->sc = std::move(next);
  });
}

template <class Cmd>
aggre_status command(const char* out_dir, aggre_result** out, Cmd&& cmd) {
  if (!out_dir || !out) return null_arg("command");
  *out = nullptr;
  return guarded([&] {
    auto res = std::make_unique<aggre_result>();
    res->r = cmd(std::string(out_dir));
    aggre::write_text(std::string(out_dir) + "/summary.json", aggre::summary_json(res->r));
    *out = res.release();
  });
}

}  // namespace

extern "C" {

const char* aggre_last_error(void) { return g_last_error.c_str(); }

const char* aggre_status_name(aggre_status status) {
  switch (status) {
    case AGGRE_OK: return "ok";
    case AGGRE_E_INVALID_ARGUMENT: return "invalid_argument";
    case AGGRE_E_NUMERIC: return "numeric";
    case AGGRE_E_CFL: return "cfl";
    case AGGRE_E_INVARIANT: return "invariant";
    case AGGRE_E_SCHEMA: return "schema";
    case AGGRE_E_HYPOTHESIS: return "hypothesis";
    case AGGRE_E_IO: return "io";
    case AGGRE_E_INTERNAL: return "internal";
  }
  return "unknown";
}

aggre_status aggre_scenario_load(const char* path, aggre_scenario** out) {
  if (!path || !out) return null_arg("aggre_scenario_load");
  *out = nullptr;
  return guarded([&] { *out = new aggre_scenario{aggre::parse_scenario(path)}; });
}

aggre_status aggre_scenario_parse(const char* json_text, const char* name, aggre_scenario** out) {
  if (!json_text || !out) return null_arg("aggre_scenario_parse");
  *out = nullptr;
  return guarded([&] { *out = new aggre_scenario{aggre::parse_scenario_text(json_text, name ? name : "scenario")}; });
}

void aggre_scenario_free(aggre_scenario* sc) { delete sc; }

const char* aggre_scenario_name(const aggre_scenario* sc) { return sc ? sc->sc.name.c_str() : ""; }

const char* aggre_scenario_directory(const aggre_scenario* sc) { return sc ? sc->sc.directory.c_str() : ""; }

uint64_t aggre_scenario_seed(const aggre_scenario* sc) { return sc ? sc->sc.seed : 0; }

aggre_status aggre_scenario_set_t_end(aggre_scenario* sc, double t_end) {
  return override_field(sc, [&](aggre::Scenario& s) {
    if (!(t_end >= 0.0)) aggre::fail(aggre::ErrorCode::InvalidArgument, "t_end must be >= 0");
    s.t_end = t_end;
  });
}

aggre_status aggre_scenario_set_dt(aggre_scenario* sc, double dt) {
  return override_field(sc, [&](aggre::Scenario& s) {
    if (!(dt > 0.0)) aggre::fail(aggre::ErrorCode::InvalidArgument, "dt must be > 0");
    s.dt = dt;
  });
}

aggre_status aggre_scenario_set_mode(aggre_scenario* sc, aggre_mode mode) {
  return override_field(sc, [&](aggre::Scenario& s) {
    if (mode != AGGRE_MODE_PLAIN && mode != AGGRE_MODE_RESCALED)
      aggre::fail(aggre::ErrorCode::InvalidArgument, "unknown mode");
    s.mode = mode == AGGRE_MODE_PLAIN ? aggre::Mode::Plain : aggre::Mode::Rescaled;
  });
}

aggre_status aggre_scenario_set_eps(aggre_scenario* sc, double eps) {
  return override_field(sc, [&](aggre::Scenario& s) {
    if (!(eps >= 0.0)) aggre::fail(aggre::ErrorCode::InvalidArgument, "eps must be >= 0");
    s.eps = eps;
  });
}

aggre_status aggre_scenario_set_seed(aggre_scenario* sc, uint64_t seed) {
  if (!sc) return null_arg("aggre_scenario_set_seed");
  sc->sc.seed = seed;
  return AGGRE_OK;
}

aggre_status aggre_cmd_run(const aggre_scenario* sc, const char* out_dir, aggre_result** out) {
  if (!sc) return null_arg("aggre_cmd_run");
  return command(out_dir, out, [&](const std::string& d) { return aggre::cmd_run(sc->sc, d); });
}

aggre_status aggre_cmd_asymptotics(const aggre_scenario* sc, const char* out_dir, aggre_result** out) {
  if (!sc) return null_arg("aggre_cmd_asymptotics");
  return command(out_dir, out, [&](const std::string& d) { return aggre::cmd_asymptotics(sc->sc, d); });
}

aggre_status aggre_cmd_oracle_check(const aggre_scenario* sc, const char* out_dir, aggre_result** out) {
  if (!sc) return null_arg("aggre_cmd_oracle_check");
  return command(out_dir, out,
                 [&](const std::string& d) { return aggre::cmd_oracle_check(sc->sc, d, sc->sc.seed); });
}

aggre_status aggre_cmd_probe(uint64_t seed, size_t samples, const char* out_dir, aggre_result** out) {
  return command(out_dir, out, [&](const std::string& d) { return aggre::cmd_probe(seed, samples, d); });
}

void aggre_result_free(aggre_result* r) { delete r; }

int aggre_result_invariants_ok(const aggre_result* r) { return r && r->r.invariants_ok ? 1 : 0; }

const char* aggre_result_failed_invariant(const aggre_result* r) { return r ? r->r.failed_invariant.c_str() : ""; }

size_t aggre_result_check_count(const aggre_result* r) { return r ? r->r.checks.size() : 0; }

aggre_status aggre_result_check(const aggre_result* r, size_t i, const char** name, double* value, double* limit,
                                int* passed) {
  if (!r) return null_arg("aggre_result_check");
  if (i >= r->r.checks.size()) {
    g_last_error = "aggre_result_check: index out of range";
    return AGGRE_E_INVALID_ARGUMENT;
  }
  const auto& c = r->r.checks[i];
  if (name) *name = c.name.c_str();
  if (value) *value = c.value;
  if (limit) *limit = c.limit;
  if (passed) *passed = c.passed ? 1 : 0;
  return AGGRE_OK;
}

int aggre_result_exit_code(const aggre_result* r, int check_mode) {
  return r ? r->r.exit_code(check_mode != 0) : 1;
}

aggre_status aggre_result_write_failure(const aggre_result* r, const char* out_dir, int check_mode) {
  if (!r || !out_dir) return null_arg("aggre_result_write_failure");
  return guarded([&] {
    nlohmann::ordered_json failed = nlohmann::ordered_json::array();
    if (!r->r.invariants_ok) failed.push_back({{"name", r->r.failed_invariant}, {"kind", "invariant"}});
    if (check_mode)
      for (const auto& c : r->r.checks)
        if (!c.passed) failed.push_back({{"name", c.name}, {"kind", "check"}, {"value", c.value}, {"limit", c.limit}});
    nlohmann::ordered_json j;
    j["command"] = r->r.command;
    j["scenario"] = r->r.scenario;
    j["status"] = "failed";
    j["exit_code"] = r->r.exit_code(check_mode != 0);
    j["message"] = r->r.failure;
    j["failed"] = failed;
    aggre::write_text(std::string(out_dir) + "/failure.json", j.dump(2) + "\n");
  });
}

aggre_status aggre_write_error_report(const char* out_dir, const char* command, aggre_status status,
                                      const char* message) {
  if (!out_dir) return null_arg("aggre_write_error_report");
  return guarded([&] {
    nlohmann::ordered_json j;
    j["command"] = command ? command : "";
    j["status"] = aggre_status_name(status);
    j["exit_code"] = 2;
    j["message"] = message ? message : "";
    aggre::write_text(std::string(out_dir) + "/failure.json", j.dump(2) + "\n");
  });
}

}  // extern "C"
