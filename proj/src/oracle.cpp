#include "aggre/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "aggre/error.hpp"

namespace aggre {

namespace {

constexpr double kPi = std::numbers::pi;

// Column integrands: the vertical integral of the kernel over |Y2| <= f(y1).
double column_v1(double f1, double X, double Y, double y1) {
  const double d = y1 - X;
  if (f1 <= 0.0) return 0.0;
  if (d == 0.0) {
    // limit of atan((f1-Y)/d) + atan((f1+Y)/d) as d -> 0 is taken symmetrically by the split
    return 0.0;
  }
  return std::atan((f1 - Y) / d) + std::atan((f1 + Y) / d);
}

double column_v2(double f1, double X, double Y, double y1) {
  if (f1 <= 0.0) return 0.0;
  const double d2 = (y1 - X) * (y1 - X);
  const double a = d2 + (Y - f1) * (Y - f1);
  const double b = d2 + (Y + f1) * (Y + f1);
  if (a == 0.0) return 0.0;  // integrable log endpoint, measure zero
  return 0.5 * std::log(a / b);
}

double integrate_piece(const std::function<double(double)>& g, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  return ts.integrate(g, lo, hi, 1e-13);
}

}  // namespace

Vec2 biot_savart_patch(const PatchProfile& patch, Vec2 point) {
  const double X = point.x, Y = point.y;
  std::vector<double> cuts = patch.breaks;
  cuts.push_back(patch.lo);
  cuts.push_back(patch.hi);
  if (X > patch.lo && X < patch.hi) cuts.push_back(X);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto g1 = [&](double y1) { return column_v1(patch.f(y1), X, Y, y1); };
  auto g2 = [&](double y1) { return column_v2(patch.f(y1), X, Y, y1); };
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::max(cuts[i], patch.lo), hi = std::min(cuts[i + 1], patch.hi);
    s1 += integrate_piece(g1, lo, hi);
    s2 += integrate_piece(g2, lo, hi);
  }
  // 2pi v1 = int [atan((f1-Y)/(y1-X)) + atan((f1+Y)/(y1-X))] dy1, 2pi v2 = int (1/2) log(...) dy1
  return {s1 / (2.0 * kPi), s2 / (2.0 * kPi)};
}

Vec2 biot_savart_patch(const SampledGraph& f, Vec2 point) {
  PatchProfile p;
  p.f = [&f](double x) { return interpolate(f, x); };
  p.lo = f.x_lo;
  p.hi = f.x_hi;
  for (const auto& c : support_components(f, 0.0)) {
    p.breaks.push_back(std::max(f.x_lo, c.lo - f.h()));
    p.breaks.push_back(std::min(f.x_hi, c.hi + f.h()));
  }
  return biot_savart_patch(p, point);
}

PatchProfile ellipse_profile(const EllipseState& e) {
  PatchProfile p;
  const double a = e.a, b = e.b;
  p.f = [a, b](double x) {
    const double r = 1.0 - (x / a) * (x / a);
    return r > 0.0 ? b * std::sqrt(r) : 0.0;
  };
  p.lo = -a;
  p.hi = a;
  return p;
}

Vec2 ellipse_interior_field(const EllipseState& e, Vec2 point) {
  const double r = (point.x / e.a) * (point.x / e.a) + (point.y / e.b) * (point.y / e.b);
  if (!(r < 1.0)) fail(ErrorCode::InvalidArgument, "ellipse_interior_field: point outside the ellipse");
  const double s = e.a + e.b;
  return {-e.b * point.x / s, -e.a * point.y / s};
}

EllipseState ellipse_ode_step(const EllipseState& e, double dt) {
  require(e.a >= e.b && e.b > 0.0 && dt > 0.0, "ellipse_ode_step: need a >= b > 0, dt > 0");
  // both axes share the same rate, so only the common shift is integrated
  const double c = e.a - e.b;
  auto rate = [c](double b) { return -(b + c) * b / (2.0 * b + c); };
  const double b = e.b;
  const double k1 = rate(b);
  const double k2 = rate(b + 0.5 * dt * k1);
  const double k3 = rate(b + 0.5 * dt * k2);
  const double k4 = rate(b + dt * k3);
  const double db = dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
  return {e.a + db, e.b + db, e.time + dt};
}

EllipseState ellipse_evolve(const EllipseState& e0, double t_end, double dt) {
  EllipseState e = e0;
  const long steps = std::lround((t_end - e0.time) / dt);
  for (long k = 0; k < steps; ++k) {
    if (e.b < 1e-12 * e0.a) break;
    e = ellipse_ode_step(e, dt);
    e.time = e0.time + (k + 1) * dt;
  }
  return e;
}

double semicircle_density(double x0, double x) {
  require(x0 > 0.0, "semicircle_density: x0 must be > 0");
  if (std::abs(x) >= x0) return 0.0;
  return 2.0 * std::sqrt(x0 * x0 - x * x) / (kPi * x0 * x0);
}

double ellipse_marginal(const EllipseState& e, double x) {
  if (std::abs(x) >= e.a) return 0.0;
  return 2.0 * e.b * std::sqrt(1.0 - (x / e.a) * (x / e.a)) / (kPi * e.a * e.b);
}

double endpoint_gap_monitor(const std::vector<double>& t, const std::vector<double>& vnorm, double d0) {
  require(t.size() == vnorm.size(), "endpoint_gap_monitor: size mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (vnorm[i] + vnorm[i - 1]) * (t[i] - t[i - 1]);
  return d0 - 2.0 * s;
}

}  // namespace aggre
