#include <cmath>
#include <numeric>

#include <doctest.h>

#include "aggre/quadrature.hpp"

using namespace aggre;

TEST_CASE("simpson weights integrate cubics exactly") {
  for (std::size_t m : {2u, 3u, 7u, 10u}) {
    const double h = 1.0 / static_cast<double>(m);
    const auto w = simpson_weights(m, h);
    REQUIRE(w.size() == m + 1);
    double s = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      const double x = static_cast<double>(i) * h;
      s += w[i] * (x * x * x - 2 * x + 1);
    }
    CHECK(s == doctest::Approx(0.25).epsilon(1e-13));
  }
}

TEST_CASE("simpson with one interval is the trapezoid rule") {
  const auto w = simpson_weights(1, 0.5);
  CHECK(w[0] == doctest::Approx(0.25));
  CHECK(w[1] == doctest::Approx(0.25));
}

TEST_CASE("trapezoid of linear data is exact") {
  std::vector<double> v{0, 1, 2, 3, 4};
  CHECK(trapezoid(v, 0.5) == doctest::Approx(4.0));
}

TEST_CASE("gauss legendre rules") {
  for (int order : {7, 10, 20}) {
    const auto& q = gauss_legendre(order);
    double w = 0.0, x4 = 0.0;
    for (auto [x, wi] : q) {
      w += wi;
      x4 += wi * std::pow(x, 4);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x4 == doctest::Approx(0.4).epsilon(1e-14));
  }
}

TEST_CASE("line and exponential-rate fits") {
  std::vector<double> t, y, e;
  for (int i = 0; i < 10; ++i) {
    t.push_back(i * 0.5);
    y.push_back(3.0 - 2.0 * t.back());
    e.push_back(5.0 * std::exp(-0.7 * t.back()));
  }
  const auto f = fit_line(t, y);
  CHECK(f.slope == doctest::Approx(-2.0));
  CHECK(f.intercept == doctest::Approx(3.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(fit_exp_rate(t, e).slope == doctest::Approx(-0.7));
  e[3] = 0.0;  // skipped, not fatal
  CHECK(fit_exp_rate(t, e).slope == doctest::Approx(-0.7));
}
