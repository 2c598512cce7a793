#include "aggre/velocity.hpp"

#include <cmath>
#include <numbers>

#include "aggre/error.hpp"
#include "aggre/parallel.hpp"
#include "aggre/quadrature.hpp"

namespace aggre {

namespace {

constexpr double kPi = std::numbers::pi;

// Tangent data at the evaluation point. When f > 0 the integrands are
// near-singular on the scale f; the model with D = 2f + p y captures that part
// analytically and only a smooth remainder is left to Simpson.
struct Local {
  double f = 0, p = 0, q = 0, A = 1;
  bool modeled = false;
};

Local make_local(double f, double p, double q) {
  Local c;
  c.modeled = f > kZeroHeight;
  c.f = c.modeled ? f : 0.0;
  c.p = p;
  c.q = q;
  c.A = 1.0 + p * p;
  return c;
}

struct Sums {
  double u1 = 0, u2 = 0, t = 0, s = 0, F = 0, G = 0;  // t: 2pi du1, s: 2pi du2

  Sums& operator+=(const Sums& o) {
    u1 += o.u1; u2 += o.u2; t += o.t; s += o.s; F += o.F; G += o.G;
    return *this;
  }
  Sums operator*(double w) const { return {u1 * w, u2 * w, t * w, s * w, F * w, G * w}; }
  Sums operator-(const Sums& o) const {
    return {u1 - o.u1, u2 - o.u2, t - o.t, s - o.s, F - o.F, G - o.G};
  }
};

// Integrand minus local model at offset y != 0, given f(x+y) and f'(x+y).
Sums remainder(const Local& c, double y, double fy, double gy, unsigned parts) {
  Sums r;
  const double y2 = y * y;
  if (!c.modeled) {
    const double e = y2 + fy * fy;
    if (parts & kU1) r.u1 = 2.0 * std::atan(fy / y);
    if (parts & kDerivatives) {
      const double gm = gy - c.p, gp = gy + c.p;
      r.t = 2.0 * gy * y / e;
      r.s = -2.0 * c.p * fy / e;
      r.F = (fy - y * c.p) * gm / e;
      r.G = (fy + y * c.p) * gp / e;
    }
    return r;
  }
  const double dm = fy - c.f, dp = fy + c.f;
  const double D = 2.0 * c.f + c.p * y;
  const double Q = y2 + D * D;
  if (parts & kU1) r.u1 = std::atan(dm / y) + std::atan2((dp - D) * y, y2 + dp * D);
  if (parts & kU2) {
    const double a = dm / y;
    r.u2 = std::log1p((a * a - c.p * c.p) / c.A) - std::log1p((dp - D) * (dp + D) / Q);
  }
  if (parts & kDerivatives) {
    const double em = y2 + dm * dm, ep = y2 + dp * dp;
    const double gm = gy - c.p, gp = gy + c.p;
    const double lin = 2.0 * c.p + c.q * y;
    r.t = gm * y / em + (gp * y / ep - lin * y / Q);
    r.s = dm * gm / em - (dp * gp / ep - D * lin / Q);
    r.F = (dm - y * c.p) * gm / em;
    r.G = (dp + y * c.p) * gp / ep - (2.0 * c.f + 2.0 * c.p * y) * lin / Q;
  }
  return r;
}

// Antiderivatives of the local models, evaluated at y.
Sums model_primitive(const Local& c, double y, unsigned parts) {
  Sums P;
  if (!c.modeled) return P;
  const double f = c.f, p = c.p, q = c.q, A = c.A;
  const double D = 2.0 * f + p * y;
  const double Qy = y * y + D * D;
  const double K0 = std::atan((2.0 * A * y + 4.0 * f * p) / (4.0 * f));
  const double Lq = std::log(Qy);
  const double J1 = Lq / (2.0 * A) - (p / A) * K0;
  const double J2 = y / A - (4.0 * f * p / A) * J1 - (2.0 * f / A) * K0;
  if (parts & kU1) P.u1 = (y == 0.0 ? 0.0 : y * std::atan(D / y)) + 2.0 * f * J1;
  if (parts & kU2) {
    const double beta = 2.0 * f * p / A, s = 2.0 * f / A;
    const double z = y + beta;
    const double Z = z * std::log(z * z + s * s) - 2.0 * z + 2.0 * s * std::atan(z / s);
    const double ay = std::abs(y);
    P.u2 = (ay > 0 ? 2.0 * y * std::log(ay) : 0.0) - 2.0 * y - Z;
  }
  if (parts & kDerivatives) {
    P.t = 2.0 * p * J1 + q * J2;
    P.s = -(2.0 * p * K0 + (2.0 * f * q + 2.0 * p * p) * J1 + p * q * J2);
    P.G = 2.0 * p * K0 + (2.0 * f * q + 4.0 * p * p) * J1 + 2.0 * p * q * J2;
  }
  return P;
}

// Samples f(x + k h), f'(x + k h) for k in [-K, K], stored at center + k.
struct Line {
  const std::vector<double>* f = nullptr;
  const std::vector<double>* g = nullptr;
  std::ptrdiff_t center = 0;
  int K = 0;
  double h = 0;

  double fk(int k) const { return (*f)[center + k]; }
  double gk(int k) const { return (*g)[center + k]; }
  double f_at(double y) const {
    return std::max(0.0, interpolate_signed(*f, 0.0, 1.0, static_cast<double>(center) + y / h));
  }
  double g_at(double y) const {
    return interpolate_signed(*g, 0.0, 1.0, static_cast<double>(center) + y / h);
  }
};

Sums pair(const Local& c, const Line& L, int k, unsigned parts) {
  const double y = k * L.h;
  Sums a = remainder(c, y, L.fk(k), L.gk(k), parts);
  a += remainder(c, -y, L.fk(-k), L.gk(-k), parts);
  return a;
}

// Integral over [-eps, eps] of u1/u2 integrands (model + remainder).
Sums inner_window(const Local& c, const Line& L, double eps, unsigned parts) {
  Sums total = model_primitive(c, eps, parts) - model_primitive(c, -eps, parts);
  const int m = static_cast<int>(std::floor(eps / L.h * (1.0 + 1e-12)));
  double a = 0.0;
  if (m >= 2) {
    const auto w = simpson_weights(m, L.h);
    const Sums p1 = pair(c, L, 1, parts), p2 = pair(c, L, 2, parts);
    total += ((p1 * 4.0) - p2) * (w[0] / 3.0);
    total += p1 * w[1];
    total += p2 * w[2];
    for (int k = 3; k <= m; ++k) total += pair(c, L, k, parts) * w[k];
    a = m * L.h;
  } else if (m == 1) {
    // too few nodes for Simpson: Gauss on [0, h] below
    a = 0.0;
  }
  if (eps > a) {
    const double mid = 0.5 * (eps + a), half = 0.5 * (eps - a);
    for (const auto& [t, wt] : gauss_legendre(10)) {
      const double y = mid + half * t;
      Sums r = remainder(c, y, L.f_at(y), L.g_at(y), parts);
      r += remainder(c, -y, L.f_at(-y), L.g_at(-y), parts);
      total += r * (wt * half);
    }
  }
  return total;
}

Sums integrate_line(const Local& c, const Line& L, const std::vector<double>& w, unsigned parts) {
  const int K = L.K;
  const double W = K * L.h;
  Sums total = model_primitive(c, W, parts) - model_primitive(c, -W, parts);
  const Sums p1 = pair(c, L, 1, parts), p2 = pair(c, L, 2, parts);
  // y = 0 node, shared by both half-windows: twice the extrapolated remainder
  total += ((p1 * 4.0) - p2) * (w[0] / 3.0);
  total += p1 * w[1];
  total += p2 * w[2];
  for (int k = 3; k <= K; ++k) total += pair(c, L, k, parts) * w[k];
  return total;
}

struct Prepared {
  std::vector<double> fpad, gpad, slope, curv, w;
  int K = 0;
  double h = 0;
};

Prepared prepare(const SampledGraph& f) {
  require(f.n >= 5, "velocity: need at least 5 nodes");
  for (std::size_t i = 0; i < f.n; ++i)
    if (!std::isfinite(f.values[i]))
      fail(ErrorCode::Numeric, "velocity: non-finite graph value at node " + std::to_string(i));
  Prepared P;
  P.K = static_cast<int>(f.n) - 1;
  P.h = f.h();
  P.slope = slope(f).values;
  P.curv = second_derivative(f).values;
  P.fpad.assign(f.n + 2 * P.K, 0.0);
  P.gpad.assign(f.n + 2 * P.K, 0.0);
  for (std::size_t i = 0; i < f.n; ++i) {
    P.fpad[i + P.K] = f.values[i];
    P.gpad[i + P.K] = P.slope[i];
  }
  P.w = simpson_weights(P.K, P.h);
  return P;
}

struct NodeResult {
  Sums full;
  Sums inner;
};

void finalize(const Sums& s, const Sums& inner, bool truncated, std::size_t i, unsigned parts,
              VelocityField& out) {
  const double c2 = 1.0 / (2.0 * kPi), c4 = 1.0 / (4.0 * kPi);
  if (parts & kU1) out.u1[i] = (truncated ? s.u1 - inner.u1 : s.u1) * c2;
  if (parts & kU2) out.u2[i] = (truncated ? s.u2 - inner.u2 : s.u2) * c4;
  if (parts & kDerivatives) {
    out.du1[i] = s.t * c2;
    out.du2[i] = s.s * c2;
    out.F[i] = s.F;
    out.G[i] = s.G;
  }
}

}  // namespace

VelocityField velocity_field(const SampledGraph& f, const VelocityOptions& opt) {
  if (opt.eps < 0.0 || std::isnan(opt.eps)) fail(ErrorCode::InvalidArgument, "velocity: eps must be > 0");
  const Prepared P = prepare(f);
  const std::size_t n = f.n;
  const unsigned parts = opt.parts;
  VelocityField out;
  if (parts & kU1) out.u1.assign(n, 0.0);
  if (parts & kU2) out.u2.assign(n, 0.0);
  if (parts & kDerivatives) {
    out.du1.assign(n, 0.0);
    out.du2.assign(n, 0.0);
    out.F.assign(n, 0.0);
    out.G.assign(n, 0.0);
  }
  const double W = P.K * P.h;
  const bool truncated = opt.eps > 0.0;
  const bool empty = truncated && opt.eps >= W;
  parallel_for(n, [&](std::size_t i) {
    const Local c = make_local(f.values[i], P.slope[i], P.curv[i]);
    Line L{&P.fpad, &P.gpad, static_cast<std::ptrdiff_t>(i) + P.K, P.K, P.h};
    Sums s = integrate_line(c, L, P.w, parts);
    Sums inner;
    const unsigned uparts = parts & (kU1 | kU2);
    if (truncated && !empty && uparts) inner = inner_window(c, L, opt.eps, uparts);
    finalize(s, inner, truncated, i, parts, out);
    if (empty) {
      if (parts & kU1) out.u1[i] = 0.0;
      if (parts & kU2) out.u2[i] = 0.0;
    }
  });
  if (parts & kU2) {
    out.R.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (f.values[i] > opt.support_threshold && f.values[i] > kZeroHeight)
        out.R[i] = -out.u2[i] / f.values[i] - 1.0;
  }
  return out;
}

namespace {

// Evaluate at an arbitrary abscissa by resampling f on the grid shifted to x.
Sums line_at(const SampledGraph& f, double x, unsigned parts) {
  if (std::isnan(x)) fail(ErrorCode::InvalidArgument, "velocity: NaN abscissa");
  const Prepared P = prepare(f);
  const SampledGraph sg = f.with_values(P.slope);
  const int K = P.K;
  std::vector<double> fl(2 * K + 1), gl(2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    const double xk = x + k * P.h;
    fl[k + K] = interpolate(f, xk);
    gl[k + K] = interpolate_signed(sg, xk);
  }
  const bool inside = x >= f.x_lo && x <= f.x_hi;
  const Local c = make_local(fl[K], gl[K], inside ? lagrange4(P.curv, f.x_lo, P.h, x) : 0.0);
  Line L{&fl, &gl, K, K, P.h};
  return integrate_line(c, L, P.w, parts);
}

}  // namespace

double u1_at(const SampledGraph& f, double x) { return line_at(f, x, kU1).u1 / (2.0 * kPi); }
double u2_at(const SampledGraph& f, double x) { return line_at(f, x, kU2).u2 / (4.0 * kPi); }

std::vector<double> dx_u1(const SampledGraph& f) { return velocity_field(f, {kDerivatives}).du1; }
std::vector<double> dx_u2(const SampledGraph& f) { return velocity_field(f, {kDerivatives}).du2; }
std::vector<double> source_F(const SampledGraph& f) { return velocity_field(f, {kDerivatives}).F; }
std::vector<double> source_G(const SampledGraph& f) { return velocity_field(f, {kDerivatives}).G; }

GDecomposition decompose_G(const SampledGraph& f) {
  const Prepared P = prepare(f);
  const std::size_t n = f.n;
  GDecomposition d;
  d.linear.resize(n);
  d.L.assign(n, 0.0);
  d.N.resize(n);
  const auto G = source_G(f);
  const double W = P.K * P.h;
  parallel_for(n, [&](std::size_t i) {
    const double fx = f.values[i], p = P.slope[i];
    d.linear[i] = 2.0 * kPi * p;
    if (fx <= kZeroHeight) return;
    // 2 f (f'(x+y) - f'(x)) / (y^2 + 4 f^2), the y = f z form of the Poisson-kernel integral
    const double c2 = 4.0 * fx * fx;
    const std::ptrdiff_t ci = static_cast<std::ptrdiff_t>(i) + P.K;
    double s = 0.0;  // integrand vanishes at y = 0
    for (int k = 1; k <= P.K; ++k) {
      const double y = k * P.h;
      const double a = (P.gpad[ci + k] - p) + (P.gpad[ci - k] - p);
      s += P.w[k] * a / (y * y + c2);
    }
    s *= 2.0 * fx;
    // tails |y| > W where f' = 0
    s += -p * (kPi - 2.0 * std::atan(W / (2.0 * fx)));
    d.L[i] = s;
  });
  for (std::size_t i = 0; i < n; ++i) d.N[i] = G[i] - d.linear[i] - d.L[i];
  return d;
}

std::vector<double> damping_R(const SampledGraph& f, double threshold) {
  VelocityOptions o;
  o.parts = kU2;
  o.support_threshold = threshold;
  return velocity_field(f, o).R;
}

std::vector<double> u1_eps(const SampledGraph& f, double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "u1_eps: eps must be > 0");
  VelocityOptions o;
  o.parts = kU1;
  o.eps = eps;
  return velocity_field(f, o).u1;
}

std::vector<double> u2_eps(const SampledGraph& f, double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "u2_eps: eps must be > 0");
  VelocityOptions o;
  o.parts = kU2;
  o.eps = eps;
  return velocity_field(f, o).u2;
}

}  // namespace aggre
