#include "aggre/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "aggre/error.hpp"

namespace aggre {

namespace {

// Snapshot nearest to each integer time 0, 1, ..., floor(T).
std::vector<const Snapshot*> unit_spaced(const TrajectoryRecord& rec) {
  std::vector<const Snapshot*> out;
  if (rec.snapshots.empty()) return out;
  const double T = rec.snapshots.back().time;
  for (long k = 0; k <= static_cast<long>(std::floor(T + 1e-9)); ++k) {
    const Snapshot* best = nullptr;
    for (const auto& s : rec.snapshots)
      if (!best || std::abs(s.time - k) < std::abs(best->time - k)) best = &s;
    if (best && std::abs(best->time - k) < 0.25 && (out.empty() || out.back() != best)) out.push_back(best);
  }
  return out;
}

std::vector<double> rescaled(const Snapshot& s) {
  std::vector<double> v(s.graph.values);
  const double e = std::exp(s.time);
  for (double& a : v) a *= e;
  return v;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

std::vector<Interval> limit_support(const FlowMap& psi_inf, const std::vector<Interval>& initial) {
  std::vector<Interval> out;
  for (const auto& c : initial) out.push_back({flow_forward(psi_inf, c.lo), flow_forward(psi_inf, c.hi)});
  return out;
}

bool intervals_disjoint(const std::vector<Interval>& iv) {
  for (std::size_t i = 0; i + 1 < iv.size(); ++i)
    if (!(iv[i].hi < iv[i + 1].lo)) return false;
  return true;
}

LimitProfile scattering_profile(const TrajectoryRecord& rec) {
  if (rec.snapshots.empty()) fail(ErrorCode::InvalidArgument, "scattering_profile: empty record");
  const Snapshot& last = rec.snapshots.back();
  LimitProfile p;
  p.phi = last.graph.with_values(rescaled(last));
  p.psi_inf = last.flow;
  p.K_inf = limit_support(p.psi_inf, rec.initial_support);
  const double m0 = l1(rec.initial);
  p.mass_ratio = m0 > 0.0 ? l1(p.phi) / m0 : 0.0;  // int 2 Phi over |rho_0| = 2 int f0

  const auto us = unit_spaced(rec);
  for (std::size_t k = 1; k < us.size(); ++k) {
    p.gap_times.push_back(us[k]->time);
    p.gaps.push_back(sup_diff(rescaled(*us[k]), rescaled(*us[k - 1])));
  }
  p.cauchy_gap = p.gaps.empty() ? 0.0 : p.gaps.back();
  double worst = 0.0;
  for (std::size_t k = 1; k < p.gaps.size(); ++k)
    if (p.gap_times[k - 1] >= 2.0 - 1e-9 && p.gaps[k - 1] > 0.0)
      worst = std::max(worst, p.gaps[k] / p.gaps[k - 1]);
  p.rates["gap_ratio_max"] = worst;
  std::vector<double> t, y;
  for (std::size_t k = 0; k < p.gaps.size(); ++k)
    if (p.gap_times[k] >= 1.0 - 1e-9 && p.gaps[k] > 0.0) {
      t.push_back(p.gap_times[k]);
      y.push_back(p.gaps[k]);
    }
  p.rates["cauchy_gap"] = t.size() >= 3 ? fit_exp_rate(t, y).slope : 0.0;

  p.g.assign(p.phi.n, 0.0);
  p.g_mask.assign(p.phi.n, false);
  const double h = p.phi.h();
  for (const auto& c : p.K_inf)
    for (std::size_t i = 0; i < p.phi.n; ++i) {
      const double x = p.phi.x(i);
      if (x < c.lo + 2 * h || x > c.hi - 2 * h) continue;
      const double f0v = interpolate(rec.initial, flow_inverse(p.psi_inf, x));
      if (f0v > 0.0 && p.phi.values[i] > 0.0) {
        p.g[i] = std::log(p.phi.values[i] / f0v);
        p.g_mask[i] = true;
      }
    }
  return p;
}

FlowLimit limit_flow(const TrajectoryRecord& rec) {
  if (rec.snapshots.empty()) fail(ErrorCode::InvalidArgument, "limit_flow: empty record");
  FlowLimit fl;
  fl.psi_inf = rec.snapshots.back().flow;
  for (const auto& s : rec.snapshots) {
    fl.J_min = std::min(fl.J_min, *std::min_element(s.flow.J.begin(), s.flow.J.end()));
    fl.J_max = std::max(fl.J_max, *std::max_element(s.flow.J.begin(), s.flow.J.end()));
  }
  for (std::size_t j = 0; j + 1 < fl.psi_inf.size(); ++j)
    if (!(fl.psi_inf.x[j + 1] > fl.psi_inf.x[j])) fl.monotone = false;
  const auto us = unit_spaced(rec);
  for (std::size_t k = 1; k < us.size(); ++k) {
    fl.times.push_back(us[k]->time);
    fl.increments.push_back(sup_diff(us[k]->flow.x, us[k - 1]->flow.x));
  }
  std::vector<double> t, y;
  for (std::size_t k = 0; k < fl.times.size(); ++k)
    if (fl.times[k] >= 1.0 - 1e-9 && fl.increments[k] > 0.0) {
      t.push_back(fl.times[k]);
      y.push_back(fl.increments[k]);
    }
  fl.increment_rate = t.size() >= 3 ? fit_exp_rate(t, y).slope : 0.0;
  return fl;
}

HausdorffFit hausdorff_decay(const TrajectoryRecord& rec, const std::vector<Interval>& K_inf,
                             double t_lo, double t_hi) {
  HausdorffFit hf;
  if (rec.snapshots.empty()) return hf;
  const FlowMap& fin = rec.snapshots.back().flow;
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (const auto& c : rec.initial_support) ends.emplace_back(tracker_index(fin, c.lo), tracker_index(fin, c.hi));
  require(ends.size() == K_inf.size(), "hausdorff_decay: component count mismatch");
  for (const auto& s : rec.snapshots) {
    if (s.time < t_lo - 1e-9 || s.time > t_hi + 1e-9) continue;
    double d = linf(s.graph);
    for (std::size_t c = 0; c < ends.size(); ++c) {
      d = std::max(d, std::abs(s.flow.x[ends[c].first] - K_inf[c].lo));
      d = std::max(d, std::abs(s.flow.x[ends[c].second] - K_inf[c].hi));
    }
    if (!hf.d_H.empty() && d > hf.d_H.back() * (1.0 + 1e-12)) hf.nonincreasing = false;
    hf.times.push_back(s.time);
    hf.d_H.push_back(d);
  }
  std::size_t usable = 0;
  for (double d : hf.d_H) usable += d > 0.0;
  if (usable < 3) fail(ErrorCode::InvalidArgument, "hausdorff_decay: fewer than 3 usable points");
  hf.fit = fit_exp_rate(hf.times, hf.d_H);
  return hf;
}

std::vector<TestFunction> default_test_functions() {
  return {
      {"one", [](double, double) { return 1.0; }},
      {"x", [](double x, double) { return x; }},
      {"x2", [](double x, double) { return x * x; }},
      {"gauss_c0", [](double x, double) { return std::exp(-(x / 0.3) * (x / 0.3)); }},
      {"gauss_c05", [](double x, double) { return std::exp(-((x - 0.5) / 0.3) * ((x - 0.5) / 0.3)); }},
      {"y", [](double, double y) { return y; }},
      {"y2", [](double, double y) { return y * y; }},
  };
}

std::vector<WeakRow> weak_convergence_test(const TrajectoryRecord& rec, const LimitProfile& profile,
                                           const std::vector<TestFunction>& fns) {
  const auto& rule = gauss_legendre(10);  // symmetric pairs, stored adjacently
  std::vector<WeakRow> out;
  for (const auto& fn : fns) {
    WeakRow row;
    row.name = fn.name;
    {
      std::vector<double> col(profile.phi.n);
      for (std::size_t i = 0; i < col.size(); ++i)
        col[i] = 2.0 * profile.phi.values[i] * fn.phi(profile.phi.x(i), 0.0);
      row.target = trapezoid(col, profile.phi.h());
    }
    for (const auto& s : rec.snapshots) {
      const SampledGraph& g = s.graph;
      std::vector<double> col(g.n, 0.0);
      for (std::size_t i = 0; i < g.n; ++i) {
        const double f = g.values[i], x = g.x(i);
        if (f <= 0.0) continue;
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < rule.size(); k += 2) {
          const double y = rule[k].first * f;
          acc += rule[k].second * (fn.phi(x, y) + fn.phi(x, -y));
        }
        col[i] = acc * f;
      }
      const double I = std::exp(s.time) * trapezoid(col, g.h());
      row.times.push_back(s.time);
      row.values.push_back(I);
      row.gaps.push_back(I - row.target);
    }
    std::vector<double> t, y;
    const double T = rec.snapshots.empty() ? 0.0 : rec.snapshots.back().time;
    for (std::size_t k = 0; k < row.times.size(); ++k)
      if (row.times[k] >= 1.0 - 1e-9 && row.times[k] <= T - 1.0 + 1e-9 && std::abs(row.gaps[k]) > 0.0) {
        t.push_back(row.times[k]);
        y.push_back(std::abs(row.gaps[k]));
      }
    row.gap_rate = t.size() >= 3 ? fit_exp_rate(t, y).slope : 0.0;
    out.push_back(std::move(row));
  }
  return out;
}

GReconstruction reconstruct_g(const LimitProfile& profile, const SampledGraph& f0) {
  GReconstruction r;
  const SampledGraph& phi = profile.phi;
  const FlowMap& psi = profile.psi_inf;
  std::vector<double> g_time_tr(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) g_time_tr[j] = -psi.int_R[j];
  for (std::size_t i = 0; i < phi.n; ++i) {
    if (!profile.g_mask[i]) continue;
    const double x = phi.x(i);
    r.x.push_back(x);
    r.g_alg.push_back(profile.g[i]);
    r.g_time.push_back(tracker_interpolate(psi, g_time_tr, x));
    r.max_gap = std::max(r.max_gap, std::abs(r.g_alg.back() - r.g_time.back()));
  }
  double total = 0.0;
  for (const auto& c : profile.K_inf) {
    const int m = 4000;
    std::vector<double> v(m + 1);
    const double dx = (c.hi - c.lo) / m;
    for (int k = 0; k <= m; ++k) {
      const double x = c.lo + k * dx;
      v[k] = interpolate(f0, flow_inverse(psi, x)) * std::exp(tracker_interpolate(psi, g_time_tr, x));
    }
    total += trapezoid(v, dx);
  }
  const double m0 = l1(f0);
  r.normalization = m0 > 0.0 ? total / m0 : 0.0;
  return r;
}

}  // namespace aggre
