#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aggre/report.hpp"
#include "aggre/scenario.hpp"

namespace aggre {

/// A named pass/fail measurement. Names are unique within one command.
struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<=", ">=", "==", "<"
  bool passed = false;
};

struct CommandResult {
  std::string command;
  std::string scenario;
  bool invariants_ok = true;
  std::string failed_invariant;
  std::string failure;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;

  bool checks_ok() const;
  /// 0 when everything enabled passed, 1 otherwise. Checks only count in check mode.
  int exit_code(bool check_mode) const;
};

CommandResult cmd_run(const Scenario& sc, const std::string& out_dir);
CommandResult cmd_asymptotics(const Scenario& sc, const std::string& out_dir);
/// Velocity against the Biot-Savart oracle (bump scenarios) or the ellipse
/// suite (ellipse scenarios). n_override > 0 resamples the graph.
CommandResult cmd_oracle_check(const Scenario& sc, const std::string& out_dir, std::uint64_t seed,
                               std::size_t n_override = 0);
CommandResult cmd_probe(std::uint64_t seed, std::size_t samples, const std::string& out_dir);

/// Velocity vs oracle rows at `count` seeded random interior graph points.
std::vector<OracleRow> velocity_oracle_rows(const Scenario& sc, std::size_t n, std::size_t count,
                                            std::uint64_t seed);

struct EllipseSuite {
  double axes_drift = 0.0;      // max |(a - b) - (a0 - b0)| over tau in [0, 10]
  double area_rel_err = 0.0;    // max relative error of ab against a0 b0 e^{-tau}
  double marginal_gap = 0.0;    // L-inf gap to the semicircle at tau = 6 (a0 > b0)
  double radius_rel_err = 0.0;  // disc only: a against a0 e^{-tau/2}
  double field_err = 0.0;       // interior linear field against the oracle, 10 points
  std::vector<OracleRow> rows;  // field comparison rows
};
EllipseSuite ellipse_suite(double a0, double b0, std::uint64_t seed);

/// summary.json: checks, invariant status, exit codes and artifacts of one command.
std::string summary_json(const CommandResult& r);

}  // namespace aggre
