#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aggre/evolve.hpp"
#include "aggre/oracle.hpp"

namespace aggre {

/// amplitude * (1 - ((x - center)/halfwidth)^2)^exponent on |x - center| < halfwidth.
struct BumpComponent {
  double center = 0.0;
  double halfwidth = 1.0;
  double amplitude = 0.1;
  double exponent = 3.0;
};

enum class InitialKind { BumpSum, FromSamples, Ellipse };

struct Scenario {
  std::string name;
  InitialKind kind = InitialKind::BumpSum;
  std::vector<BumpComponent> components;  // bump_sum
  std::vector<double> samples;            // from_samples, on [sample_lo, sample_hi]
  double sample_lo = -1.0, sample_hi = 1.0;
  double ellipse_a = 2.0, ellipse_b = 1.0;  // ellipse: upper half graph b sqrt(1 - x^2/a^2)

  std::size_t n = 257;
  double margin = 0.0;
  std::optional<double> x_lo, x_hi;  // explicit domain; default hull +- margin

  double dt = 0.01;
  double t_end = 1.0;
  Mode mode = Mode::Plain;
  double eps = 0.0;

  double snapshot_cadence = 0.1;
  std::string directory;
  std::uint64_t seed = 0;
};

/// Reads and validates a scenario file. Schema problems are all reported in one
/// ErrorCode::Schema error with their field paths; hypothesis violations in one
/// ErrorCode::Hypothesis error; a too large dt in ErrorCode::Cfl.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& name_hint = "scenario");

/// Hypothesis and CFL checks; parse_scenario already calls this. Call again
/// after overriding fields.
void validate_scenario(const Scenario& sc);

Interval scenario_domain(const Scenario& sc);
double initial_value(const Scenario& sc, double x);
/// Initial graph on the scenario grid (or on n_override nodes when nonzero).
SampledGraph initial_graph(const Scenario& sc, std::size_t n_override = 0);
/// Closed-form patch for the Biot-Savart oracle.
PatchProfile scenario_patch(const Scenario& sc);
RunConfig run_config(const Scenario& sc);
TrajectoryRecord run_scenario(const Scenario& sc);

const char* to_string(InitialKind k);

}  // namespace aggre
