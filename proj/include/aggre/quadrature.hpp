#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace aggre {

/// Composite Simpson weights for m equal intervals of width h (m + 1 nodes).
/// Odd m closes the last three intervals with the 3/8 rule; m == 1 falls back to
/// the trapezoid rule.
std::vector<double> simpson_weights(std::size_t m, double h);

/// Trapezoid sum of uniformly spaced samples.
double trapezoid(const std::vector<double>& v, double h);

/// Gauss-Legendre nodes and weights on [-1, 1] (orders 7, 10, 20).
const std::vector<std::pair<double, double>>& gauss_legendre(int order);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares line through (t, y).
LinearFit fit_line(const std::vector<double>& t, const std::vector<double>& y);

/// Exponential rate of y(t) = C e^{rate t}; non-positive samples are skipped.
LinearFit fit_exp_rate(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace aggre
