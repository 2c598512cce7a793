#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aggre/evolve.hpp"
#include "aggre/quadrature.hpp"

namespace aggre {

struct LimitProfile {
  SampledGraph phi;  // e^T f(T) at the final snapshot
  FlowMap psi_inf;   // final flow snapshot
  std::vector<Interval> K_inf;
  std::vector<double> g;      // algebraic reconstruction on the grid (0 where masked)
  std::vector<bool> g_mask;   // true where g is defined
  double cauchy_gap = 0.0;    // sup |H(t_last) - H(t_prev)| over unit-spaced snapshots
  std::vector<double> gap_times, gaps;
  double mass_ratio = 0.0;    // int 2 Phi / |rho_0|_L1
  std::map<std::string, double> rates;
};

/// Profile from the final snapshot plus unit-spaced Cauchy gaps and their fitted rate.
LimitProfile scattering_profile(const TrajectoryRecord& rec);

struct FlowLimit {
  FlowMap psi_inf;
  std::vector<double> times, increments;  // max tracker displacement per unit time
  double increment_rate = 0.0;
  double J_min = 1.0, J_max = 1.0;         // over all snapshots
  bool monotone = true;
};

FlowLimit limit_flow(const TrajectoryRecord& rec);

/// Images of the initial components under psi_inf.
std::vector<Interval> limit_support(const FlowMap& psi_inf, const std::vector<Interval>& initial);
bool intervals_disjoint(const std::vector<Interval>& iv);

struct HausdorffFit {
  std::vector<double> times, d_H;
  LinearFit fit;  // log d_H against t
  bool nonincreasing = true;
};

/// d_H(D_t, K_inf x {0}) = max(|f(t)|_inf, endpoint displacement), fitted on t in [t_lo, t_hi].
HausdorffFit hausdorff_decay(const TrajectoryRecord& rec, const std::vector<Interval>& K_inf,
                             double t_lo, double t_hi);

struct TestFunction {
  std::string name;
  std::function<double(double, double)> phi;
};

std::vector<TestFunction> default_test_functions();

struct WeakRow {
  std::string name;
  double target = 0.0;  // 2 int Phi(x) phi(x, 0) dx
  std::vector<double> times, values, gaps;
  double gap_rate = 0.0;  // fitted exponential rate of |gap|, 0 when not fittable
};

std::vector<WeakRow> weak_convergence_test(const TrajectoryRecord& rec, const LimitProfile& profile,
                                           const std::vector<TestFunction>& fns);

struct GReconstruction {
  std::vector<double> x, g_alg, g_time;  // masked interior grid nodes
  double max_gap = 0.0;
  double normalization = 0.0;  // int f0(psi_inf^{-1}(x)) e^{g_time} dx / |f0|_L1
};

/// g_alg = log(Phi / f0 o psi_inf^{-1}) against g_time = -int R along the trackers,
/// both on grid nodes at least 2h inside K_inf.
GReconstruction reconstruct_g(const LimitProfile& profile, const SampledGraph& f0);

}  // namespace aggre
