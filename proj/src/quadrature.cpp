#include "aggre/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "aggre/error.hpp"

namespace aggre {

std::vector<double> simpson_weights(std::size_t m, double h) {
  require(m >= 1, "simpson_weights needs at least one interval");
  std::vector<double> w(m + 1, 0.0);
  if (m == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  std::size_t even = (m % 2 == 0) ? m : m - 3;
  for (std::size_t i = 0; i + 2 <= even; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (even != m) {
    const double c = 3.0 * h / 8.0;
    w[even] += c;
    w[even + 1] += 3.0 * c;
    w[even + 2] += 3.0 * c;
    w[even + 3] += c;
  }
  return w;
}

double trapezoid(const std::vector<double>& v, double h) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * h;
}

namespace {

template <int N>
std::vector<std::pair<double, double>> expand_rule() {
  using rule = boost::math::quadrature::gauss<double, N>;
  std::vector<std::pair<double, double>> out;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.emplace_back(x[i], w[i]);
    if (x[i] != 0.0) out.emplace_back(-x[i], w[i]);
  }
  return out;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre(int order) {
  static const auto g7 = expand_rule<7>();
  static const auto g10 = expand_rule<10>();
  static const auto g20 = expand_rule<20>();
  switch (order) {
    case 7: return g7;
    case 10: return g10;
    case 20: return g20;
    default: fail(ErrorCode::InvalidArgument, "gauss_legendre: supported orders are 7, 10, 20");
  }
}

LinearFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
  require(t.size() == y.size(), "fit_line: size mismatch");
  const std::size_t n = t.size();
  if (n < 2) fail(ErrorCode::InvalidArgument, "fit_line: fewer than 2 points");
  double mt = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = stt > 0 ? sty / stt : 0.0;
  fit.intercept = my - fit.slope * mt;
  fit.r2 = (stt > 0 && syy > 0) ? sty * sty / (stt * syy) : 1.0;
  return fit;
}

LinearFit fit_exp_rate(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> tt, ly;
  for (std::size_t i = 0; i < t.size() && i < y.size(); ++i) {
    if (y[i] > 0 && std::isfinite(y[i])) {
      tt.push_back(t[i]);
      ly.push_back(std::log(y[i]));
    }
  }
  if (tt.size() < 3) fail(ErrorCode::InvalidArgument, "fit_exp_rate: fewer than 3 usable points");
  return fit_line(tt, ly);
}

}  // namespace aggre
