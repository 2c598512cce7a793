#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace aggre {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Graph height sampled on a fixed uniform grid over [x_lo, x_hi].
struct SampledGraph {
  double x_lo = -1.0;
  double x_hi = 1.0;
  std::size_t n = 0;
  double time = 0.0;
  std::vector<double> values;

  double h() const { return (x_hi - x_lo) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return x_lo + static_cast<double>(i) * h(); }

  static SampledGraph sample(double x_lo, double x_hi, std::size_t n,
                             const std::function<double(double)>& fn);
  SampledGraph with_values(std::vector<double> v) const;
};

struct NormReport {
  double linf = 0.0;
  double l1 = 0.0;
  double slope_linf = 0.0;
  double dini = 0.0;      // of the slope f'
  double holder_s = 0.0;  // of the slope f'
  std::vector<Interval> support;
};

/// Monotone piecewise cubic (limited fourth-order slopes), zero outside the grid,
/// clamped below at 0.
double interpolate(const SampledGraph& g, double x);
/// Same interpolant without the clamp; used for signed data such as slopes.
double interpolate_signed(const SampledGraph& g, double x);
double interpolate_signed(const std::vector<double>& v, double x_lo, double h, double x);

/// Four-point Lagrange cubic for smooth signed fields; x is clamped into the grid.
double lagrange4(const std::vector<double>& v, double x_lo, double h, double x);

double linf(const SampledGraph& g);
double l1(const SampledGraph& g);

/// Cumulative per-lag maxima: entry k is max |g_i - g_j| over |i - j| <= k.
std::vector<double> modulus_table(const SampledGraph& g);
double modulus_of_continuity(const SampledGraph& g, double r);
/// Log-grid quadrature of omega(r)/r over [h, 1]; a lower-biased estimate.
double dini_norm(const SampledGraph& g);
double holder_seminorm(const SampledGraph& g, double s);

/// Fourth-order finite differences, one-sided at the ends.
SampledGraph slope(const SampledGraph& g);
SampledGraph second_derivative(const SampledGraph& g);

/// max |g'| / (|g'|_s^{1/(1+s)} g^{s/(1+s)}) over nodes where g > threshold.
double slope_bound_ratio(const SampledGraph& g, double s, double threshold);

/// Maximal runs of nodes with g > threshold, reported as [first node, last node].
std::vector<Interval> support_components(const SampledGraph& g, double threshold);

NormReport norm_report(const SampledGraph& g, double s, double threshold);

}  // namespace aggre
