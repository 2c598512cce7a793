#include "aggre/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aggre/error.hpp"

namespace aggre {

const char* to_string(Mode m) { return m == Mode::Plain ? "plain" : "rescaled"; }

FlowMap FlowMap::identity(std::vector<double> seeds) {
  FlowMap f;
  f.x0 = seeds;
  f.x = std::move(seeds);
  f.J.assign(f.x.size(), 1.0);
  f.int_R.assign(f.x.size(), 0.0);
  f.int_U.assign(f.x.size(), 0.0);
  return f;
}

namespace {

// Monotone cubic Hermite through (xs, ys) with xs strictly increasing.
double pchip(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const std::size_t n = xs.size();
  if (n == 1) return ys[0];
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  if (i >= n - 1) i = n - 2;
  auto secant = [&](std::size_t k) { return (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]); };
  auto node_slope = [&](std::size_t k) {
    if (k == 0) return secant(0);
    if (k == n - 1) return secant(n - 2);
    const double d0 = secant(k - 1), d1 = secant(k);
    if (d0 * d1 <= 0.0) return 0.0;
    const double h0 = xs[k] - xs[k - 1], h1 = xs[k + 1] - xs[k];
    const double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
    return (w1 + w2) / (w1 / d0 + w2 / d1);
  };
  const double hk = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / hk;
  const double m0 = node_slope(i) * hk, m1 = node_slope(i + 1) * hk;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ys[i] + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * ys[i + 1] +
         (t3 - t2) * m1;
}

}  // namespace

double flow_inverse(const FlowMap& flow, double x) {
  require(!flow.x.empty(), "flow_inverse: empty flow map");
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  if (x < flow.x.front() - tol || x > flow.x.back() + tol)
    fail(ErrorCode::InvalidArgument, "flow_inverse: point outside the tracked range");
  return pchip(flow.x, flow.x0, std::clamp(x, flow.x.front(), flow.x.back()));
}

double flow_forward(const FlowMap& flow, double x0) {
  require(!flow.x0.empty(), "flow_forward: empty flow map");
  if (x0 < flow.x0.front() || x0 > flow.x0.back())
    fail(ErrorCode::InvalidArgument, "flow_forward: point outside the seeded range");
  return pchip(flow.x0, flow.x, x0);
}

double tracker_interpolate(const FlowMap& flow, const std::vector<double>& v, double x) {
  require(v.size() == flow.x.size() && !v.empty(), "tracker_interpolate: size mismatch");
  return pchip(flow.x, v, std::clamp(x, flow.x.front(), flow.x.back()));
}

std::size_t tracker_index(const FlowMap& flow, double x0) {
  require(!flow.x0.empty(), "tracker_index: empty flow map");
  std::size_t best = 0;
  for (std::size_t j = 1; j < flow.x0.size(); ++j)
    if (std::abs(flow.x0[j] - x0) < std::abs(flow.x0[best] - x0)) best = j;
  return best;
}

double cfl_dt_max(const SampledGraph& g, double u1_linf) {
  return 0.5 * g.h() / std::max(u1_linf, 1e-12);
}

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      fail(ErrorCode::Numeric, std::string("non-finite ") + what + " at node " + std::to_string(i));
}

// R outside the thresholded support copies the nearest valid node, so that
// interpolation stencils near the edges stay smooth.
std::vector<double> extend_R(const std::vector<double>& R, const std::vector<double>& f, double thr) {
  const std::size_t n = f.size();
  std::vector<double> out(R);
  std::vector<long> valid;
  for (std::size_t i = 0; i < n; ++i)
    if (f[i] > thr && f[i] > kZeroHeight) valid.push_back(static_cast<long>(i));
  if (valid.empty()) return std::vector<double>(n, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k + 1 < valid.size() &&
           std::abs(valid[k + 1] - static_cast<long>(i)) <= std::abs(valid[k] - static_cast<long>(i)))
      ++k;
    out[i] = R[valid[k]];
  }
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

}  // namespace

StepResult step(const SampledGraph& g, const FlowMap& flow, double dt, const StepConfig& cfg) {
  require(dt > 0.0, "step: dt must be > 0");
  const std::size_t n = g.n;
  const double h = g.h();
  const bool rescaled = cfg.mode == Mode::Rescaled;
  StepResult out;
  StepDiagnostics& d = out.diag;

  VelocityOptions o0;
  o0.parts = kU1 | kU2;
  o0.support_threshold = cfg.support_threshold;
  o0.eps = cfg.eps;
  const VelocityField v0 = velocity_field(g, o0);
  check_finite(v0.u1, "u1");
  check_finite(v0.u2, "u2");
  d.u1_linf = max_abs(v0.u1);
  for (std::size_t i = 0; i < n; ++i) {
    d.vel_linf = std::max(d.vel_linf, std::hypot(v0.u1[i], v0.u2[i]));
    if (g.values[i] > cfg.support_threshold) d.R_linf = std::max(d.R_linf, std::abs(v0.R[i]));
  }
  const double dt_max = cfl_dt_max(g, d.u1_linf);
  if (dt > dt_max * (1.0 + 1e-12))
    fail(ErrorCode::Cfl, "step: dt " + std::to_string(dt) + " exceeds CFL bound " + std::to_string(dt_max));
  const std::vector<double> R0 = extend_R(v0.R, g.values, cfg.support_threshold);

  // predictor: state at t + dt/2
  std::vector<double> fh(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double base = interpolate(g, g.x(i) - 0.5 * dt * v0.u1[i]);
    const double val = rescaled ? std::exp(-0.5 * dt * (1.0 + R0[i])) * base : base + 0.5 * dt * v0.u2[i];
    fh[i] = std::max(0.0, val);
  }
  SampledGraph gh = g.with_values(std::move(fh));
  gh.time = g.time + 0.5 * dt;
  VelocityOptions oh = o0;
  oh.parts = kAllParts;
  oh.support_threshold = cfg.support_threshold * std::exp(-0.5 * dt);
  const VelocityField vh = velocity_field(gh, oh);
  check_finite(vh.u1, "u1 (half step)");
  check_finite(vh.u2, "u2 (half step)");
  check_finite(vh.du1, "du1 (half step)");
  const std::vector<double> Rh = extend_R(vh.R, gh.values, oh.support_threshold);
  auto at = [&](const std::vector<double>& v, double x) { return lagrange4(v, g.x_lo, h, x); };

  // corrector: full step with velocities frozen at the half state
  std::vector<double> fp(n);
  d.min_before_clamp = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.x(i);
    const double xm = x - 0.5 * dt * vh.u1[i];
    const double X = x - dt * at(vh.u1, xm);
    const double base = interpolate(g, X);
    const double Rm = at(Rh, xm);
    double val;
    if (rescaled) {
      val = std::exp(-dt * (1.0 + Rm)) * base;
    } else {
      // u2 at the midpoint through its factorization -f (1 + R)
      val = base - dt * interpolate(gh, xm) * (1.0 + Rm);
    }
    if (!std::isfinite(val))
      fail(ErrorCode::Numeric, "step: non-finite value at node " + std::to_string(i));
    d.min_before_clamp = std::min(d.min_before_clamp, val);
    if (val < 0.0) {
      d.clamped_mass += -val * h;
      val = 0.0;
    }
    if (g.values[i] == 0.0 && val > 0.0) d.leak = std::max(d.leak, val);
    fp[i] = val;
  }
  out.graph = g.with_values(std::move(fp));
  out.graph.time = g.time + dt;

  out.flow = flow;
  FlowMap& fl = out.flow;
  for (std::size_t j = 0; j < fl.size(); ++j) {
    const double psi = flow.x[j];
    const double psih = psi + 0.5 * dt * at(v0.u1, psi);
    const double u = at(vh.u1, psih);
    fl.x[j] = psi + dt * u;
    fl.J[j] = flow.J[j] * std::exp(dt * at(vh.du1, psih));
    const double Rv = at(Rh, psih);
    fl.int_R[j] = flow.int_R[j] + dt * Rv;
    fl.int_U[j] = flow.int_U[j] - dt * (1.0 + Rv);
    if (!std::isfinite(fl.x[j]) || !std::isfinite(fl.J[j]))
      fail(ErrorCode::Numeric, "step: non-finite tracker " + std::to_string(j));
  }
  return out;
}

StepResult step_eps(const SampledGraph& g, const FlowMap& flow, double dt, double eps, Mode mode) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "step_eps: eps must be > 0");
  StepConfig cfg;
  cfg.mode = mode;
  cfg.eps = eps;
  cfg.support_threshold = 1e-10 * linf(g);
  return step(g, flow, dt, cfg);
}

const InvariantStat* TrajectoryRecord::invariant(const std::string& name) const {
  for (const auto& s : invariants)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

// Components bounded by the zero nodes that enclose them.
std::vector<Interval> zero_bounded_components(const SampledGraph& f, double thr) {
  std::vector<Interval> out;
  const double h = f.h();
  for (const auto& c : support_components(f, thr))
    out.push_back({std::max(f.x_lo, c.lo - h), std::min(f.x_hi, c.hi + h)});
  return out;
}

}  // namespace

std::vector<double> default_tracker_seeds(const SampledGraph& f0, double threshold, std::size_t uniform) {
  std::vector<double> s;
  for (const auto& c : zero_bounded_components(f0, threshold)) {
    s.push_back(c.lo);
    s.push_back(c.hi);
  }
  for (std::size_t k = 0; k < uniform; ++k)
    s.push_back(f0.x_lo + (f0.x_hi - f0.x_lo) * static_cast<double>(k) / static_cast<double>(uniform - 1));
  std::sort(s.begin(), s.end());
  std::vector<double> u;
  for (double v : s)
    if (u.empty() || v - u.back() > 1e-9 * f0.h()) u.push_back(v);
  return u;
}

namespace {

struct InvariantBook {
  std::vector<InvariantStat> stats;
  std::vector<bool> enforced;

  std::size_t add(const std::string& name, double tol, bool enforce) {
    stats.push_back({name, tol, 0.0, 0.0});
    enforced.push_back(enforce);
    return stats.size() - 1;
  }
  // Returns false when an enforced invariant is now broken.
  bool record(std::size_t k, double violation, double t) {
    auto& s = stats[k];
    if (violation > s.max_violation) {
      s.max_violation = violation;
      s.time_of_max = t;
    }
    return !(enforced[k] && violation > s.tolerance);
  }
};

}  // namespace

TrajectoryRecord run(const SampledGraph& f0, const RunConfig& cfg) {
  require(f0.n >= 5, "run: need at least 5 nodes");
  require(cfg.dt > 0.0 && cfg.t_end >= 0.0, "run: need dt > 0 and t_end >= 0");
  for (std::size_t i = 0; i < f0.n; ++i) {
    if (!std::isfinite(f0.values[i])) fail(ErrorCode::InvalidArgument, "run: non-finite initial value");
    if (f0.values[i] < 0.0) fail(ErrorCode::Hypothesis, "run: initial data must be nonnegative");
  }
  if (f0.values.front() != 0.0 || f0.values.back() != 0.0)
    fail(ErrorCode::Hypothesis, "run: initial data must vanish at the hull endpoints");

  TrajectoryRecord rec;
  rec.initial = f0;
  rec.config = cfg;
  const double amp0 = linf(f0);
  const double thr0 = cfg.support_threshold_rel * amp0;
  rec.initial_support = zero_bounded_components(f0, thr0);

  FlowMap flow = FlowMap::identity(default_tracker_seeds(f0, thr0, cfg.uniform_trackers ? cfg.uniform_trackers : f0.n));
  SampledGraph g = f0;
  const double slope0 = linf(slope(f0));
  const double mass0 = l1(f0);
  const double h = f0.h();

  // Seed indices of the outer hull endpoints and of each component's endpoints.
  auto seed_index = [&](double x0) { return tracker_index(flow, x0); };
  std::vector<std::pair<std::size_t, std::size_t>> comp_trackers;
  for (const auto& c : rec.initial_support) comp_trackers.emplace_back(seed_index(c.lo), seed_index(c.hi));
  const std::size_t ia = comp_trackers.empty() ? 0 : comp_trackers.front().first;
  const std::size_t ib = comp_trackers.empty() ? flow.size() - 1 : comp_trackers.back().second;

  InvariantBook book;
  const auto k_pos = book.add("positivity", 1e-12, true);
  const auto k_max = book.add("max_principle", 0.0, true);
  const auto k_leak = book.add("support_leak", 0.0, true);
  const auto k_bnd = book.add("boundary_zero", 0.0, true);
  const auto k_end = book.add("endpoint_monotone", 0.0, true);
  const auto k_grid = book.add("grid_support_monotone", 0.0, true);
  const auto k_ord = book.add("tracker_order", 0.0, true);
  const auto k_clamp = book.add("clamped_mass", cfg.clamp_mass_tolerance, true);
  const auto k_slope = book.add("slope_blowup", cfg.slope_blowup_factor, true);
  const auto k_jac = book.add("jacobian_band", 0.0, false);
  const auto k_mass = book.add("mass_law", 1e-3, false);

  auto grid_hull = [&](const SampledGraph& s, double thr, long& lo, long& hi) {
    lo = -1;
    hi = -1;
    for (std::size_t i = 0; i < s.n; ++i)
      if (s.values[i] > thr) {
        if (lo < 0) lo = static_cast<long>(i);
        hi = static_cast<long>(i);
      }
  };

  double clamped_since_row = 0.0;
  double last_R = 0.0, last_vel = 0.0;
  auto make_row = [&](const SampledGraph& s, const FlowMap& fl, double thr) {
    MonitorRow r;
    r.time = s.time;
    r.mass_et = std::exp(s.time) * l1(s);
    r.linf = linf(s);
    r.slope_linf = linf(slope(s));
    r.R_linf = last_R;
    r.vel_linf = last_vel;
    r.a_t = fl.x[ia];
    r.b_t = fl.x[ib];
    long lo, hi;
    grid_hull(s, thr, lo, hi);
    r.grid_lo = lo >= 0 ? s.x(lo) : 0.0;
    r.grid_hi = hi >= 0 ? s.x(hi) : 0.0;
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& [jl, jr] : comp_trackers)
      for (std::size_t i = 0; i < s.n; ++i)
        if (s.x(i) > fl.x[jl] + h && s.x(i) < fl.x[jr] - h) mn = std::min(mn, s.values[i]);
    r.min_support = std::isfinite(mn) ? mn : 0.0;
    r.J_min = *std::min_element(fl.J.begin(), fl.J.end());
    r.J_max = *std::max_element(fl.J.begin(), fl.J.end());
    r.clamped_mass = clamped_since_row;
    clamped_since_row = 0.0;
    return r;
  };
  auto snapshot = [&](const SampledGraph& s, const FlowMap& fl, double thr) {
    rec.snapshots.push_back({s.time, s, norm_report(s, cfg.holder_s, thr), fl});
    rec.monitors.push_back(make_row(s, fl, thr));
  };

  {
    // velocity sup-norm at t = 0 for the endpoint-gap history
    const VelocityField v = velocity_field(f0, {kU1 | kU2, thr0, cfg.eps});
    for (std::size_t i = 0; i < f0.n; ++i) last_vel = std::max(last_vel, std::hypot(v.u1[i], v.u2[i]));
    for (std::size_t i = 0; i < f0.n; ++i)
      if (f0.values[i] > thr0) last_R = std::max(last_R, std::abs(v.R[i]));
  }
  snapshot(g, flow, thr0);

  const long nsteps = std::lround(cfg.t_end / cfg.dt);
  const long cadence = std::max(1L, std::lround(cfg.snapshot_every / cfg.dt));
  long hull_lo, hull_hi;
  grid_hull(g, thr0, hull_lo, hull_hi);
  StepConfig sc;
  sc.mode = cfg.mode;
  sc.eps = cfg.eps;
  bool ok = true;
  for (long k = 0; k < nsteps && ok; ++k) {
    const double t = g.time;
    sc.support_threshold = thr0 * std::exp(-t);
    StepResult r = step(g, flow, cfg.dt, sc);
    const double tn = r.graph.time;
    const double thr_n = thr0 * std::exp(-tn);
    const StepDiagnostics& d = r.diag;
    last_R = d.R_linf;
    rec.step_times.push_back(t);
    rec.step_vel_linf.push_back(d.vel_linf);
    clamped_since_row += d.clamped_mass;

    ok &= book.record(k_pos, std::max(0.0, -d.min_before_clamp), tn);
    const double lold = linf(g), lnew = linf(r.graph);
    ok &= book.record(k_max, std::max(0.0, lnew - lold * (1.0 + 1e-12)), tn);
    ok &= book.record(k_leak, d.leak, tn);
    ok &= book.record(k_bnd, std::max(r.graph.values.front(), r.graph.values.back()), tn);
    ok &= book.record(k_end, std::max({0.0, flow.x[ia] - r.flow.x[ia], r.flow.x[ib] - flow.x[ib]}), tn);
    long lo, hi;
    grid_hull(r.graph, thr_n, lo, hi);
    double grid_v = 0.0;
    if (lo >= 0 && hull_lo >= 0) grid_v = std::max({0.0, (hull_lo - lo) * h, (hi - hull_hi) * h});
    if (lo >= 0 && hull_lo < 0) grid_v = h;  // support reappeared
    ok &= book.record(k_grid, grid_v, tn);
    hull_lo = lo;
    hull_hi = hi;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < r.flow.size(); ++j) min_gap = std::min(min_gap, r.flow.x[j + 1] - r.flow.x[j]);
    ok &= book.record(k_ord, min_gap > 0.0 ? 0.0 : std::numeric_limits<double>::min() - min_gap, tn);
    const double mass = l1(r.graph);
    ok &= book.record(k_clamp, mass > 0.0 ? d.clamped_mass / mass : 0.0, tn);
    const double sl = linf(slope(r.graph));
    ok &= book.record(k_slope, slope0 > 0.0 ? sl / slope0 : 0.0, tn);
    const double jmin = *std::min_element(r.flow.J.begin(), r.flow.J.end());
    const double jmax = *std::max_element(r.flow.J.begin(), r.flow.J.end());
    book.record(k_jac, std::max({0.0, 0.5 - jmin, jmax - 1.5}), tn);
    if (mass0 > 0.0) book.record(k_mass, std::abs(std::exp(tn) * mass / mass0 - 1.0), tn);

    g = std::move(r.graph);
    flow = std::move(r.flow);
    last_vel = d.vel_linf;
    const bool last = (k + 1 == nsteps) || !ok;
    if ((k + 1) % cadence == 0 || last) snapshot(g, flow, thr_n);
  }
  {
    const VelocityField v = velocity_field(g, {kU1 | kU2, thr0 * std::exp(-g.time), cfg.eps});
    double m = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) m = std::max(m, std::hypot(v.u1[i], v.u2[i]));
    rec.step_times.push_back(g.time);
    rec.step_vel_linf.push_back(m);
  }
  rec.invariants = book.stats;
  if (!ok) {
    for (std::size_t k = 0; k < book.stats.size(); ++k)
      if (book.enforced[k] && !book.stats[k].passed()) {
        rec.failed_invariant = book.stats[k].name;
        rec.failure = "invariant " + book.stats[k].name + " broken: violation " +
                      std::to_string(book.stats[k].max_violation) + " at t=" +
                      std::to_string(book.stats[k].time_of_max);
        break;
      }
  }
  return rec;
}

}  // namespace aggre
