#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "aggre/graphstate.hpp"

namespace aggre {

/// Patch {(x, y): |y| <= f(x)} with f supported in [lo, hi]. Breaks lists
/// points where f is not smooth (component endpoints).
struct PatchProfile {
  std::function<double(double)> f;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> breaks;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// v(X) = -(1/2pi) int_patch (X - Y)/|X - Y|^2 dA(Y), inner vertical integral in
/// closed form, outer integral by adaptive quadrature split at X's abscissa.
Vec2 biot_savart_patch(const PatchProfile& patch, Vec2 point);
Vec2 biot_savart_patch(const SampledGraph& f, Vec2 point);

struct EllipseState {
  double a = 1.0;
  double b = 1.0;
  double time = 0.0;
};

PatchProfile ellipse_profile(const EllipseState& e);

/// Linear interior field of the uniform ellipse patch.
Vec2 ellipse_interior_field(const EllipseState& e, Vec2 point);

/// One RK4 step of da/dt = db/dt = -ab/(a+b).
EllipseState ellipse_ode_step(const EllipseState& e, double dt);

/// Integrates to t_end with step dt; stops early once b < 1e-12 a0.
EllipseState ellipse_evolve(const EllipseState& e0, double t_end, double dt);

double semicircle_density(double x0, double x);
double ellipse_marginal(const EllipseState& e, double x);

/// d0 - 2 int_0^t |v|_inf, trapezoid over the sampled history.
double endpoint_gap_monitor(const std::vector<double>& t, const std::vector<double>& vnorm, double d0);

}  // namespace aggre
