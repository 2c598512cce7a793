#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aggre/aggre.h"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

struct Options {
  std::string scenario;
  std::string out;
  std::optional<double> t_end, dt, eps;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 50;
  bool check = false;
};

int input_error(const std::string& out_dir, const char* command, aggre_status st, const std::string& msg) {
  std::fprintf(stderr, "aggre %s: %s error: %s\n", command, aggre_status_name(st), msg.c_str());
  if (!out_dir.empty()) aggre_write_error_report(out_dir.c_str(), command, st, msg.c_str());
  return kInputError;
}

int finish(const char* command, aggre_result* res, const std::string& out_dir, bool check) {
  const int code = aggre_result_exit_code(res, check ? 1 : 0);
  const std::size_t n = aggre_result_check_count(res);
  for (std::size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    double value = 0.0, limit = 0.0;
    int passed = 0;
    aggre_result_check(res, i, &name, &value, &limit, &passed);
    std::printf("%-48s %-4s value=%.6g limit=%.6g\n", name, passed ? "ok" : "FAIL", value, limit);
  }
  if (!aggre_result_invariants_ok(res))
    std::printf("invariant breached: %s\n", aggre_result_failed_invariant(res));
  if (code != kPass) aggre_result_write_failure(res, out_dir.c_str(), check ? 1 : 0);
  std::printf("%s: %s (artifacts in %s)\n", command, code == kPass ? "pass" : "fail", out_dir.c_str());
  aggre_result_free(res);
  return code;
}

int scenario_command(const char* command, const Options& o,
                     aggre_status (*fn)(const aggre_scenario*, const char*, aggre_result**)) {
  aggre_scenario* sc = nullptr;
  aggre_status st = aggre_scenario_load(o.scenario.c_str(), &sc);
  std::string out_dir = o.out;
  if (st != AGGRE_OK) return input_error(out_dir, command, st, aggre_last_error());
  if (out_dir.empty()) out_dir = aggre_scenario_directory(sc);

  auto fail_with = [&](aggre_status s) {
    const std::string msg = aggre_last_error();
    aggre_scenario_free(sc);
    return input_error(out_dir, command, s, msg);
  };
  if (o.mode) {
    if (*o.mode != "plain" && *o.mode != "rescaled") {
      aggre_scenario_free(sc);
      return input_error(out_dir, command, AGGRE_E_INVALID_ARGUMENT, "--mode must be plain or rescaled");
    }
    if ((st = aggre_scenario_set_mode(sc, *o.mode == "plain" ? AGGRE_MODE_PLAIN : AGGRE_MODE_RESCALED)) != AGGRE_OK)
      return fail_with(st);
  }
  if (o.t_end && (st = aggre_scenario_set_t_end(sc, *o.t_end)) != AGGRE_OK) return fail_with(st);
  if (o.dt && (st = aggre_scenario_set_dt(sc, *o.dt)) != AGGRE_OK) return fail_with(st);
  if (o.eps && (st = aggre_scenario_set_eps(sc, *o.eps)) != AGGRE_OK) return fail_with(st);
  if (o.seed) aggre_scenario_set_seed(sc, *o.seed);

  aggre_result* res = nullptr;
  st = fn(sc, out_dir.c_str(), &res);
  if (st != AGGRE_OK) return fail_with(st);
  aggre_scenario_free(sc);
  return finish(command, res, out_dir, o.check);
}

void common_flags(CLI::App* app, Options& o, bool needs_scenario) {
  auto* s = app->add_option("--scenario", o.scenario, "scenario JSON file");
  if (needs_scenario) s->required()->check(CLI::ExistingFile);
  app->add_option("--out", o.out, "output directory (default: the scenario's outputs.directory)");
  app->add_option("--t-end", o.t_end, "override solver.t_end");
  app->add_option("--dt", o.dt, "override solver.dt");
  app->add_option("--mode", o.mode, "override solver.mode (plain|rescaled)");
  app->add_option("--eps", o.eps, "override solver.eps");
  app->add_option("--seed", o.seed, "override the seed");
  app->add_flag("--check", o.check, "acceptance mode: failed checks also give exit code 1");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph aggregation solver: runs, asymptotics, oracle checks and operator probes"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "integrate a scenario and export monitors");
  auto* asym = app.add_subcommand("asymptotics", "integrate and extract the scattering limit");
  auto* oracle = app.add_subcommand("oracle-check", "compare velocities with the 2D Biot-Savart oracle");
  auto* probe = app.add_subcommand("probe", "finite-sample continuity probes of the Cauchy-type operators");
  common_flags(run, o, true);
  common_flags(asym, o, true);
  common_flags(oracle, o, true);
  common_flags(probe, o, false);
  probe->add_option("--samples", o.samples, "number of random samples")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInputError;
  }

  if (*run) return scenario_command("run", o, aggre_cmd_run);
  if (*asym) return scenario_command("asymptotics", o, aggre_cmd_asymptotics);
  if (*oracle) return scenario_command("oracle-check", o, aggre_cmd_oracle_check);

  const std::string out_dir = o.out.empty() ? std::string("out/probe") : o.out;
  aggre_result* res = nullptr;
  const aggre_status st = aggre_cmd_probe(o.seed.value_or(20240601), o.samples, out_dir.c_str(), &res);
  if (st != AGGRE_OK) return input_error(out_dir, "probe", st, aggre_last_error());
  return finish("probe", res, out_dir, o.check);
}
