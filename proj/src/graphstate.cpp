#include "aggre/graphstate.hpp"

#include <algorithm>
#include <cmath>

#include "aggre/error.hpp"

namespace aggre {

SampledGraph SampledGraph::sample(double x_lo, double x_hi, std::size_t n,
                                  const std::function<double(double)>& fn) {
  require(n >= 2 && x_hi > x_lo, "SampledGraph: need n >= 2 and x_hi > x_lo");
  SampledGraph g;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  g.n = n;
  g.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.values[i] = fn(g.x(i));
  return g;
}

SampledGraph SampledGraph::with_values(std::vector<double> v) const {
  require(v.size() == n, "SampledGraph::with_values: size mismatch");
  SampledGraph g = *this;
  g.values = std::move(v);
  return g;
}

namespace {

// Fourth-order centered slope limited into the Fritsch-Carlson monotone box
// [0, 3 min(|d0|, |d1|)]; zero at discrete extrema. Outside the grid the data
// is taken as zero.
double node_slope(const double* v, std::size_t n, double h, std::size_t i) {
  auto at = [&](long k) { return (k < 0 || k >= static_cast<long>(n)) ? 0.0 : v[k]; };
  const long j = static_cast<long>(i);
  const double d0 = (at(j) - at(j - 1)) / h;
  const double d1 = (at(j + 1) - at(j)) / h;
  if (d0 * d1 <= 0.0) return 0.0;
  const double m = (-at(j + 2) + 8 * at(j + 1) - 8 * at(j - 1) + at(j - 2)) / (12 * h);
  if (m * d0 <= 0.0) return 0.0;
  const double cap = 3.0 * std::min(std::abs(d0), std::abs(d1));
  return std::abs(m) > cap ? std::copysign(cap, m) : m;
}

double monotone_eval(const double* v, std::size_t n, double x_lo, double h, double x) {
  if (std::isnan(x)) fail(ErrorCode::InvalidArgument, "interpolate: NaN abscissa");
  const double s = (x - x_lo) / h;
  if (s < 0.0 || s > static_cast<double>(n - 1)) return 0.0;
  std::size_t i = static_cast<std::size_t>(s);
  if (i >= n - 1) return v[n - 1];
  const double t = s - static_cast<double>(i);
  if (t == 0.0) return v[i];
  const double m0 = node_slope(v, n, h, i) * h;
  const double m1 = node_slope(v, n, h, i + 1) * h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * m0 +
         (-2 * t3 + 3 * t2) * v[i + 1] + (t3 - t2) * m1;
}

}  // namespace

double interpolate(const SampledGraph& g, double x) {
  return std::max(0.0, monotone_eval(g.values.data(), g.n, g.x_lo, g.h(), x));
}

double interpolate_signed(const SampledGraph& g, double x) {
  return monotone_eval(g.values.data(), g.n, g.x_lo, g.h(), x);
}

double interpolate_signed(const std::vector<double>& v, double x_lo, double h, double x) {
  return monotone_eval(v.data(), v.size(), x_lo, h, x);
}

double lagrange4(const std::vector<double>& v, double x_lo, double h, double x) {
  const std::size_t n = v.size();
  if (n < 4) fail(ErrorCode::InvalidArgument, "lagrange4: need at least 4 nodes");
  double s = (x - x_lo) / h;
  s = std::clamp(s, 0.0, static_cast<double>(n - 1));
  std::size_t i = static_cast<std::size_t>(s);
  i = std::clamp<std::size_t>(i, 1, n - 3);
  const double t = s - static_cast<double>(i);  // stencil i-1, i, i+1, i+2 at -1, 0, 1, 2
  const double w0 = -t * (t - 1) * (t - 2) / 6.0;
  const double w1 = (t + 1) * (t - 1) * (t - 2) / 2.0;
  const double w2 = -(t + 1) * t * (t - 2) / 2.0;
  const double w3 = (t + 1) * t * (t - 1) / 6.0;
  return w0 * v[i - 1] + w1 * v[i] + w2 * v[i + 1] + w3 * v[i + 2];
}

double linf(const SampledGraph& g) {
  double m = 0.0;
  for (double v : g.values) m = std::max(m, std::abs(v));
  return m;
}

double l1(const SampledGraph& g) {
  double s = 0.0;
  for (double v : g.values) s += std::abs(v);
  // boundary nodes vanish for admissible graphs, so this equals the trapezoid rule
  s -= 0.5 * (std::abs(g.values.front()) + std::abs(g.values.back()));
  return s * g.h();
}

std::vector<double> modulus_table(const SampledGraph& g) {
  const std::size_t n = g.n;
  std::vector<double> w(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) m = std::max(m, std::abs(g.values[i + k] - g.values[i]));
    w[k] = std::max(w[k - 1], m);
  }
  return w;
}

double modulus_of_continuity(const SampledGraph& g, double r) {
  if (!(r >= 0.0)) fail(ErrorCode::InvalidArgument, "modulus_of_continuity: r must be >= 0");
  const auto w = modulus_table(g);
  const double lag = r / g.h() * (1.0 + 1e-12);
  if (lag >= static_cast<double>(g.n - 1)) return w.back();
  return w[static_cast<std::size_t>(lag)];
}

namespace {

// omega at a real radius, linear between lags (exact when omega is linear).
double omega_linear(const std::vector<double>& w, double h, double r) {
  const double s = r / h;
  if (s >= static_cast<double>(w.size() - 1)) return w.back();
  const std::size_t k = static_cast<std::size_t>(s);
  const double t = s - static_cast<double>(k);
  return (1 - t) * w[k] + t * w[k + 1];
}

}  // namespace

double dini_norm(const SampledGraph& g) {
  const double h = g.h();
  if (h >= 1.0) return 0.0;
  const auto w = modulus_table(g);
  // integral of omega(r)/r dr = integral of omega(e^u) du on u in [log h, 0]
  const int m = 2000;
  const double u0 = std::log(h);
  const double du = -u0 / m;
  double s = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double r = std::exp(u0 + j * du);
    const double c = (j == 0 || j == m) ? 0.5 : 1.0;
    s += c * omega_linear(w, h, r);
  }
  return s * du;
}

double holder_seminorm(const SampledGraph& g, double s) {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorCode::InvalidArgument, "holder_seminorm: s must lie in (0,1)");
  const auto w = modulus_table(g);
  const double h = g.h();
  double best = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k) {
    const double r = static_cast<double>(k) * h;
    if (r > 1.0 + 1e-12) break;
    best = std::max(best, w[k] / std::pow(r, s));
  }
  return best;
}

SampledGraph slope(const SampledGraph& g) {
  const std::size_t n = g.n;
  require(n >= 5, "slope: need n >= 5");
  const double h = g.h();
  const auto& v = g.values;
  std::vector<double> d(n);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-v[i + 2] + 8 * v[i + 1] - 8 * v[i - 1] + v[i - 2]) / (12 * h);
  d[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h);
  d[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h);
  d[n - 1] = (25 * v[n - 1] - 48 * v[n - 2] + 36 * v[n - 3] - 16 * v[n - 4] + 3 * v[n - 5]) / (12 * h);
  d[n - 2] = (3 * v[n - 1] + 10 * v[n - 2] - 18 * v[n - 3] + 6 * v[n - 4] - v[n - 5]) / (12 * h);
  return g.with_values(std::move(d));
}

SampledGraph second_derivative(const SampledGraph& g) {
  const std::size_t n = g.n;
  require(n >= 5, "second_derivative: need n >= 5");
  const double h2 = g.h() * g.h();
  const auto& v = g.values;
  std::vector<double> d(n);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-v[i + 2] + 16 * v[i + 1] - 30 * v[i] + 16 * v[i - 1] - v[i - 2]) / (12 * h2);
  d[1] = (v[0] - 2 * v[1] + v[2]) / h2;
  d[n - 2] = (v[n - 1] - 2 * v[n - 2] + v[n - 3]) / h2;
  d[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / h2;
  d[n - 1] = (2 * v[n - 1] - 5 * v[n - 2] + 4 * v[n - 3] - v[n - 4]) / h2;
  return g.with_values(std::move(d));
}

double slope_bound_ratio(const SampledGraph& g, double s, double threshold) {
  const SampledGraph d = slope(g);
  const double hs = holder_seminorm(d, s);
  if (hs == 0.0) return 0.0;
  const double a = std::pow(hs, 1.0 / (1.0 + s));
  double best = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    if (g.values[i] <= threshold) continue;
    best = std::max(best, std::abs(d.values[i]) / (a * std::pow(g.values[i], s / (1.0 + s))));
  }
  return best;
}

std::vector<Interval> support_components(const SampledGraph& g, double threshold) {
  if (!(threshold >= 0.0)) fail(ErrorCode::InvalidArgument, "support_components: threshold must be >= 0");
  std::vector<Interval> out;
  std::size_t i = 0;
  while (i < g.n) {
    if (g.values[i] > threshold) {
      std::size_t j = i;
      while (j + 1 < g.n && g.values[j + 1] > threshold) ++j;
      out.push_back({g.x(i), g.x(j)});
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

NormReport norm_report(const SampledGraph& g, double s, double threshold) {
  NormReport r;
  r.linf = linf(g);
  r.l1 = l1(g);
  const SampledGraph d = slope(g);
  r.slope_linf = linf(d);
  r.dini = dini_norm(d);
  r.holder_s = holder_seminorm(d, s);
  r.support = support_components(g, threshold);
  return r;
}

}  // namespace aggre
