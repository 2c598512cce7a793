#pragma once

#include <string>
#include <vector>

#include "aggre/graphstate.hpp"
#include "aggre/velocity.hpp"

namespace aggre {

enum class Mode { Plain, Rescaled };

const char* to_string(Mode m);

/// Characteristic map sampled at trackers. int_R accumulates the damping
/// remainder R along each path, int_U the exponent U = u2/f = -(1+R).
struct FlowMap {
  std::vector<double> x0, x, J, int_R, int_U;

  static FlowMap identity(std::vector<double> seeds);
  std::size_t size() const { return x.size(); }
};

/// Inverse map by monotone interpolation of (x -> x0); rejects out-of-range x.
double flow_inverse(const FlowMap& flow, double x);
/// Forward map by monotone interpolation of (x0 -> x).
double flow_forward(const FlowMap& flow, double x0);
/// Monotone interpolation of a per-tracker quantity at a current position.
double tracker_interpolate(const FlowMap& flow, const std::vector<double>& v, double x);
/// Index of the tracker seeded closest to x0.
std::size_t tracker_index(const FlowMap& flow, double x0);

struct StepConfig {
  Mode mode = Mode::Plain;
  double eps = 0.0;                // > 0 selects the truncated velocities
  double support_threshold = 0.0;  // absolute threshold on f for R
};

struct StepDiagnostics {
  double min_before_clamp = 0.0;  // over all nodes
  double clamped_mass = 0.0;
  double leak = 0.0;  // largest new value at a node that held exactly zero
  double u1_linf = 0.0;
  double vel_linf = 0.0;  // max |(u1, u2)| at the start state
  double R_linf = 0.0;
};

struct StepResult {
  SampledGraph graph;
  FlowMap flow;
  StepDiagnostics diag;
};

/// Largest admissible step: 0.5 h / max(|u1|_inf, 1e-12).
double cfl_dt_max(const SampledGraph& g, double u1_linf);

/// Midpoint semi-Lagrangian step. Throws ErrorCode::Cfl when dt exceeds the
/// CFL bound and ErrorCode::Numeric on NaN (naming the node).
StepResult step(const SampledGraph& g, const FlowMap& flow, double dt, const StepConfig& cfg);
StepResult step_eps(const SampledGraph& g, const FlowMap& flow, double dt, double eps, Mode mode);

struct RunConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Mode mode = Mode::Plain;
  double eps = 0.0;
  double snapshot_every = 0.1;
  double support_threshold_rel = 1e-10;  // relative to |f0|_inf
  double holder_s = 0.5;
  std::size_t uniform_trackers = 0;  // 0: one per grid node
  double slope_blowup_factor = 10.0;
  double clamp_mass_tolerance = 1e-8;
};

struct Snapshot {
  double time = 0.0;
  SampledGraph graph;
  NormReport norms;
  FlowMap flow;
};

struct MonitorRow {
  double time = 0.0;
  double mass_et = 0.0;  // e^t |f(t)|_L1
  double linf = 0.0;
  double slope_linf = 0.0;
  double R_linf = 0.0;
  double a_t = 0.0, b_t = 0.0;          // tracker hull endpoints
  double grid_lo = 0.0, grid_hi = 0.0;  // hull of nodes above threshold
  double min_support = 0.0;             // min f over the initial-support nodes
  double J_min = 1.0, J_max = 1.0;
  double clamped_mass = 0.0;            // accumulated since the previous row
  double vel_linf = 0.0;
};

struct InvariantStat {
  std::string name;
  double tolerance = 0.0;
  double max_violation = 0.0;
  double time_of_max = 0.0;

  bool passed() const { return max_violation <= tolerance; }
};

struct TrajectoryRecord {
  SampledGraph initial;
  std::vector<Interval> initial_support;
  RunConfig config;
  std::vector<Snapshot> snapshots;
  std::vector<MonitorRow> monitors;
  std::vector<InvariantStat> invariants;
  std::vector<double> step_times, step_vel_linf;  // every step, for the endpoint-gap bound
  std::string failure;                             // empty when the run completed cleanly
  std::string failed_invariant;

  bool ok() const { return failure.empty(); }
  const InvariantStat* invariant(const std::string& name) const;
};

/// Seeds: every initial component endpoint plus a uniform sample of the hull.
std::vector<double> default_tracker_seeds(const SampledGraph& f0, double threshold, std::size_t uniform);

/// Integrates to t_end. Invariant breaches stop the run and are reported in
/// failure / failed_invariant; CFL and input errors throw.
TrajectoryRecord run(const SampledGraph& f0, const RunConfig& cfg);

}  // namespace aggre
