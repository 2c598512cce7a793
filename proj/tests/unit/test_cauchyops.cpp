#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "aggre/cauchyops.hpp"
#include "aggre/error.hpp"

using namespace aggre;

namespace {

const BumpSum kF{{{0.1, 0.0, 0.5}, {0.05, 0.4, 0.3}}};
const BumpSum kG{{{1.0, 0.1, 0.4}, {-0.5, -0.5, 0.3}}};
const BumpSum kH{{{0.7, -0.2, 0.5}}};

SampledGraph on(const BumpSum& b, std::size_t n) {
  return SampledGraph::sample(-1, 1, n, [&](double x) { return b(x); });
}

double gk(const std::function<double(double)>& fn, std::initializer_list<double> breaks) {
  double s = 0.0;
  const std::vector<double> b(breaks);
  for (std::size_t k = 0; k + 1 < b.size(); ++k)
    s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, b[k], b[k + 1], 15, 1e-13);
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("bump sums") {
  CHECK(kF(0.0) == doctest::Approx(0.1 + 0.05 * std::pow(1 - (0.4 / 0.3) * (0.4 / 0.3), 3) * 0));
  CHECK(kF(2.0) == 0.0);
  CHECK(BumpSum{}(0.3) == 0.0);
}

TEST_CASE("trivial inputs give zero") {
  const std::size_t n = 65;
  const auto f = on(kF, n), g = on(kG, n), h = on(kH, n);
  const auto z = on(BumpSum{}, n);
  for (auto part : {CauchyPart::Re, CauchyPart::Im}) {
    CHECK(max_abs(cauchy_bilinear(f, z, h, 1.0, part)) == 0.0);
    CHECK(max_abs(cauchy_bilinear(f, g, z, 1.0, part)) == 0.0);
    CHECK(max_abs(cauchy_bilinear(f, g, h, 0.0, part)) == 0.0);
  }
  CHECK(max_abs(cauchy_bilinear(z, g, h, 1.0, CauchyPart::Im)) == 0.0);
  CHECK(max_abs(t_operator(f, z, 1.0, 1.0)) == 0.0);
}

TEST_CASE("linearity in g and h") {
  const std::size_t n = 129;
  const auto f = on(kF, n), g = on(kG, n), h = on(kH, n);
  auto g2 = g, h3 = h;
  for (auto& v : g2.values) v *= 2.0;
  for (auto& v : h3.values) v *= -3.0;
  for (auto part : {CauchyPart::Re, CauchyPart::Im}) {
    const auto a = cauchy_bilinear(f, g, h, 0.5, part);
    const auto b = cauchy_bilinear(f, g2, h3, 0.5, part);
    for (std::size_t i = 0; i < n; ++i) CHECK(b[i] == doctest::Approx(-6.0 * a[i]).epsilon(1e-12));
  }
  const auto t1 = t_operator(f, g, 0.5, 0.5), t2 = t_operator(f, g2, 0.5, 0.5);
  for (std::size_t i = 0; i < n; ++i) CHECK(t2[i] == doctest::Approx(2.0 * t1[i]).epsilon(1e-12));
}

TEST_CASE("T operator matches adaptive principal-value quadrature") {
  const std::size_t n = 513;
  const auto f = on(kF, n), g = on(kG, n);
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 0.1}, std::pair{1.0, 0.0}}) {
    const auto t = t_operator(f, g, a, b);
    for (std::size_t i : {n / 5, n / 3, n / 2, 2 * n / 3, n - 1}) {
      const double x = f.x(i);
      auto pair = [&](double y) {
        const double dp = kF(x) + kF(x + y), dm = kF(x) + kF(x - y);
        return y * (kG(a * x + b * y) / (y * y + dp * dp) - kG(a * x - b * y) / (y * y + dm * dm));
      };
      const double ref = gk(pair, {0, 1e-3, 0.05, 0.2, 0.5, 1, 2, 5, 20, 100, 300});
      CHECK(std::abs(t[i] - ref) < 1e-4);
    }
  }
}

TEST_CASE("curved Cauchy operator matches adaptive quadrature") {
  const std::size_t n = 513;
  const auto f = on(kF, n), g = on(kG, n), h = on(kH, n);
  const double theta = 0.5;
  const auto re = cauchy_bilinear(f, g, h, theta, CauchyPart::Re);
  const auto im = cauchy_bilinear(f, g, h, theta, CauchyPart::Im);
  for (std::size_t i : {n / 4, n / 2, 3 * n / 4}) {
    const double x = f.x(i);
    auto kernel = [&](double y, bool real) {
      const double df = kF(x + y) - kF(x);
      const double dg = kG(x + theta * y) - kG(x), dh = kH(x + y) - kH(x);
      return (real ? y : -df) * dg * dh / (y * y + df * df);
    };
    // Window [-M, M] with M the grid width; the data vanish off the grid.
    const double rre = gk([&](double y) { return kernel(y, true); }, {-2.0, -1.0, -0.3, 0.0, 0.3, 1.0, 2.0});
    const double rim = gk([&](double y) { return kernel(y, false); }, {-2.0, -1.0, -0.3, 0.0, 0.3, 1.0, 2.0});
    CHECK(std::abs(re[i] - rre) < 1e-4);
    CHECK(std::abs(im[i] - rim) < 1e-4);
  }
}

TEST_CASE("invalid arguments") {
  const auto f = on(kF, 65), g = on(kG, 65), gc = on(kG, 33);
  CHECK_THROWS_AS(cauchy_bilinear(f, gc, g, 1.0, CauchyPart::Re), Error);
  CHECK_THROWS_AS(cauchy_bilinear(f, g, g, 1.5, CauchyPart::Re), Error);
  CHECK_THROWS_AS(t_operator(f, g, 2.0, 1.0), Error);
  auto neg = f;
  neg.values[10] = -1.0;
  CHECK_THROWS_AS(t_operator(neg, g, 1.0, 1.0), Error);
}

TEST_CASE("probe family is seeded and well formed") {
  const auto a = probe_family(10, 42), b = probe_family(10, 42), c = probe_family(10, 43);
  REQUIRE(a.size() == 10);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].f(0.1) == b[k].f(0.1));
    CHECK(a[k].g(-0.3) == b[k].g(-0.3));
    CHECK(!a[k].f.terms.empty());
    CHECK(a[k].f.terms.size() <= 3);
    for (const auto& t : a[k].f.terms) {
      CHECK(t.amplitude > 0.0);
      CHECK(std::abs(t.center) + t.width <= 0.9 + 1e-12);
    }
  }
  CHECK(a[0].f(0.0) != c[0].f(0.0));
}

TEST_CASE("sample ratios: finite, zero for zero data") {
  ProbeConfig cfg;
  const auto fam = probe_family(1, 5);
  const auto f = on(fam[0].f, 129), g = on(fam[0].g, 129), h = on(fam[0].h, 129), z = on(BumpSum{}, 129);
  const auto r = sample_ratios(f, g, h, cfg);
  CHECK(!r.empty());
  for (const auto& [k, v] : r) CHECK_MESSAGE(std::isfinite(v), k);
  for (const auto& [k, v] : sample_ratios(f, z, z, cfg)) CHECK_MESSAGE(v == 0.0, k);
}

TEST_CASE("small probe run passes") {
  ProbeConfig cfg;
  cfg.samples = 6;
  const auto s = probe_bounds(cfg);
  CHECK(s.samples == 6);
  for (const auto& r : s.reports) CHECK_MESSAGE(r.passed(), r.op);
  CHECK(s.sweep.betas.size() == 3);
  CHECK(s.sweep.growth.front() == doctest::Approx(1.0));
}
