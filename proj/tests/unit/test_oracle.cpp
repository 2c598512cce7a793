#include <cmath>

#include <doctest.h>

#include "aggre/oracle.hpp"

using namespace aggre;

TEST_CASE("empty patch has zero field") {
  PatchProfile p{[](double) { return 0.0; }, -1.0, 1.0, {}};
  const Vec2 v = biot_savart_patch(p, {0.3, 0.1});
  CHECK(v.x == 0.0);
  CHECK(v.y == 0.0);
}

TEST_CASE("disc: interior field is -X/2") {
  const EllipseState disc{1.0, 1.0, 0.0};
  const auto p = ellipse_profile(disc);
  for (double r : {0.2, 0.5, 0.9}) {
    const Vec2 v = biot_savart_patch(p, {r, 0.0});
    CHECK(v.x == doctest::Approx(-r / 2).epsilon(1e-8));
    CHECK(std::abs(v.y) < 1e-10);
  }
  const Vec2 v = biot_savart_patch(p, {0.3, 0.4});
  CHECK(v.x == doctest::Approx(-0.15).epsilon(1e-8));
  CHECK(v.y == doctest::Approx(-0.2).epsilon(1e-8));
}

TEST_CASE("symmetric patch: field odd in x, divergence -1 inside") {
  PatchProfile p{[](double x) { return x * x < 1 ? 0.3 * std::pow(1 - x * x, 3) : 0.0; }, -1.0, 1.0, {}};
  const Vec2 a = biot_savart_patch(p, {0.4, 0.05});
  const Vec2 b = biot_savart_patch(p, {-0.4, 0.05});
  CHECK(a.x == doctest::Approx(-b.x).epsilon(1e-9));
  CHECK(a.y == doctest::Approx(b.y).epsilon(1e-9));
  const double d = 1e-4;
  const Vec2 c{0.2, 0.05};
  const double div = (biot_savart_patch(p, {c.x + d, c.y}).x - biot_savart_patch(p, {c.x - d, c.y}).x +
                      biot_savart_patch(p, {c.x, c.y + d}).y - biot_savart_patch(p, {c.x, c.y - d}).y) /
                     (2 * d);
  CHECK(div == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("ellipse interior field matches the oracle") {
  const EllipseState e{2.0, 1.0, 0.0};
  const auto p = ellipse_profile(e);
  for (Vec2 pt : {Vec2{0.5, 0.3}, Vec2{-1.2, 0.2}, Vec2{0.0, -0.6}}) {
    const Vec2 a = ellipse_interior_field(e, pt), o = biot_savart_patch(p, pt);
    CHECK(std::abs(a.x - o.x) < 1e-8);
    CHECK(std::abs(a.y - o.y) < 1e-8);
  }
}

TEST_CASE("ellipse ODE conserves a - b and decays the area like e^{-t}") {
  const EllipseState e0{2.0, 1.0, 0.0};
  const auto e = ellipse_evolve(e0, 5.0, 1e-3);
  CHECK(e.time == doctest::Approx(5.0));
  CHECK(std::abs((e.a - e.b) - 1.0) < 1e-12);
  CHECK(e.a * e.b == doctest::Approx(2.0 * std::exp(-5.0)).epsilon(1e-9));
  const auto d = ellipse_evolve({1.0, 1.0, 0.0}, 2.0, 1e-3);
  CHECK(d.a == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("semicircle density is normalized and supported on [-x0, x0]") {
  const double x0 = 1.5;
  double s = 0.0;
  const int m = 20000;
  for (int i = 0; i < m; ++i) {
    const double x = -x0 + (i + 0.5) * 2 * x0 / m;
    s += semicircle_density(x0, x) * 2 * x0 / m;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(semicircle_density(x0, 1.6) == 0.0);
  CHECK(semicircle_density(x0, 0.0) == doctest::Approx(2.0 / (M_PI * x0)));
}

TEST_CASE("ellipse marginal approaches the semicircle") {
  const EllipseState e0{2.0, 1.0, 0.0};
  double prev = 1e9;
  for (double t : {2.0, 4.0, 8.0}) {
    const auto e = ellipse_evolve(e0, t, 1e-3);
    double gap = 0.0;
    for (int i = -50; i <= 50; ++i) {
      const double x = 0.0199 * i;
      gap = std::max(gap, std::abs(ellipse_marginal(e, x) - semicircle_density(1.0, x)));
    }
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("endpoint gap monitor closed form") {
  std::vector<double> t{0, 0.5, 1.0, 1.5}, v{0.2, 0.2, 0.2, 0.2};
  CHECK(endpoint_gap_monitor(t, v, 2.0) == doctest::Approx(2.0 - 2 * 0.2 * 1.5));
  std::vector<double> lin{0.0, 0.5, 1.0, 1.5};
  CHECK(endpoint_gap_monitor(t, lin, 3.0) == doctest::Approx(3.0 - 2 * 1.125));
}
