// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aggre/asymptotics.hpp"
#include "aggre/cauchyops.hpp"
#include "aggre/commands.hpp"
#include "aggre/scenario.hpp"

using namespace aggre;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Scenario load(const char* name) { return parse_scenario(std::string(AGGRE_SCENARIO_DIR) + "/" + name + ".json"); }

// Shared trajectories, computed on first use.
const TrajectoryRecord& small_plain() {
  static const TrajectoryRecord r = run_scenario(load("small_bump"));
  return r;
}

const TrajectoryRecord& small_rescaled() {
  static const TrajectoryRecord r = [] {
    auto sc = load("small_bump");
    sc.mode = Mode::Rescaled;
    sc.t_end = 8.0;
    sc.snapshot_cadence = 0.25;
    return run_scenario(sc);
  }();
  return r;
}

const TrajectoryRecord& two_bump() {
  static const TrajectoryRecord r = run_scenario(load("two_bump"));
  return r;
}

double terminal_gap(const SampledGraph& a, const SampledGraph& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) g = std::max(g, std::abs(a.values[i] - b.values[i]));
  return g;
}

Outcome c1_oracle() {
  double worst = 0.0;
  std::string d;
  for (const char* name : {"small_bump", "two_bump"}) {
    const auto sc = load(name);
    double e = 0.0;
    for (const auto& row : velocity_oracle_rows(sc, 2048, 20, sc.seed)) e = std::max(e, row.abs_err());
    worst = std::max(worst, e);
    d += fmt("%s max|err|=%.2e; ", name, e);
  }
  return {worst < 1e-4, d + "limit 1e-4"};
}

Outcome c2_mass() {
  auto sc = load("small_bump");
  sc.dt = 1e-3;
  sc.t_end = 3.0;
  const auto rec = run_scenario(sc);
  const double m0 = l1(rec.initial);
  double worst = 0.0;
  for (const auto& m : rec.monitors) worst = std::max(worst, std::abs(m.mass_et / m0 - 1.0));
  const bool reached = rec.ok() && std::abs(rec.monitors.back().time - 3.0) < 1e-9;
  return {reached && worst < 1e-3, fmt("max |e^t|f|_1/|f0|_1 - 1| = %.2e over %zu rows (limit 1e-3)", worst,
                                       rec.monitors.size())};
}

Outcome c3_max_principle() {
  bool ok = true;
  std::string d;
  const std::vector<std::string> enforced{"positivity", "max_principle", "support_leak", "boundary_zero",
                                          "endpoint_monotone", "grid_support_monotone", "clamped_mass"};
  for (const char* name : {"small_bump", "two_bump", "eps_sweep", "ellipse_2_1", "disc"}) {
    const TrajectoryRecord local = [&] {
      if (std::string(name) == "small_bump") return small_plain();
      if (std::string(name) == "two_bump") return two_bump();
      return run_scenario(load(name));
    }();
    bool this_ok = local.ok();
    double clamp = 0.0;
    for (const auto& n : enforced) {
      const auto* s = local.invariant(n);
      if (!s || !s->passed()) this_ok = false;
    }
    if (const auto* pos = local.invariant("positivity")) clamp = pos->max_violation;
    for (const auto& m : local.monitors)
      if (m.clamped_mass > 1e-12) this_ok = false;
    ok = ok && this_ok;
    d += fmt("%s %s (neg<=%.1e); ", name, this_ok ? "ok" : "violated", clamp);
  }
  return {ok, d};
}

Outcome c4_slope() {
  const auto& rec = small_plain();
  std::vector<double> t, y;
  for (const auto& m : rec.monitors)
    if (m.time >= 1.0 - 1e-9 && m.time <= 4.0 + 1e-9) {
      t.push_back(m.time);
      y.push_back(m.slope_linf);
    }
  const double rate = fit_exp_rate(t, y).slope;
  return {std::abs(rate + 1.0) <= 0.1, fmt("rate of |f'|_inf on [1,4] = %.4f (target -1 +- 10%%)", rate)};
}

Outcome c5_scattering() {
  const auto p = scattering_profile(small_rescaled());
  const double ratio = p.rates.at("gap_ratio_max");
  const bool ok = small_rescaled().ok() && ratio < 1.0 && std::abs(p.mass_ratio - 1.0) < 1e-3;
  return {ok, fmt("max successive gap ratio %.3f (< 1), last gap %.2e, |int 2Phi/|rho0|_1 - 1| = %.2e (< 1e-3)",
                  ratio, p.cauchy_gap, std::abs(p.mass_ratio - 1.0))};
}

Outcome c6_hausdorff() {
  const auto p = scattering_profile(small_rescaled());
  const auto hd = hausdorff_decay(small_rescaled(), p.K_inf, 1.0, 6.0);
  const double rate = hd.fit.slope;
  const auto& rec2 = two_bump();
  const auto fl = limit_flow(rec2);
  const auto k = limit_support(fl.psi_inf, rec2.initial_support);
  bool comp_ok = rec2.ok() && k.size() == 2 && rec2.initial_support.size() == 2 && intervals_disjoint(k);
  double worst = 1e9;
  for (std::size_t i = 0; i < k.size() && i < rec2.initial_support.size(); ++i)
    worst = std::min(worst, k[i].length() / rec2.initial_support[i].length());
  comp_ok = comp_ok && worst >= 0.5;
  return {std::abs(rate + 1.0) <= 0.15 && comp_ok,
          fmt("d_H rate on [1,6] = %.4f (target -1 +- 15%%, r2 %.4f); two_bump K_inf has %zu components, min "
              "length ratio %.3f (>= 0.5)",
              rate, hd.fit.r2, k.size(), worst)};
}

Outcome c7_flow() {
  bool ok = true;
  std::string d;
  for (auto* rec : {&small_rescaled(), &two_bump(), &small_plain()}) {
    const auto fl = limit_flow(*rec);
    const bool r_ok = fl.increment_rate <= -0.4 && fl.J_min >= 0.5 && fl.J_max <= 1.5 && fl.monotone;
    ok = ok && r_ok;
    d += fmt("[rate %.3f, J in [%.3f, %.3f]] ", fl.increment_rate, fl.J_min, fl.J_max);
  }
  return {ok, d + "(rate <= -0.4, J in [0.5, 1.5])"};
}

Outcome c8_ellipse() {
  const auto s = ellipse_suite(2.0, 1.0, 4);
  const bool ok = s.axes_drift <= 1e-10 && s.area_rel_err <= 1e-8 && s.marginal_gap <= 2e-2 && s.field_err <= 1e-4;
  return {ok, fmt("a-b drift %.1e (1e-10), area rel err %.1e (1e-8), marginal gap at tau=6 %.4f (2e-2), field err "
                  "%.1e (1e-4)",
                  s.axes_drift, s.area_rel_err, s.marginal_gap, s.field_err)};
}

Outcome c9_eps() {
  auto sc = load("eps_sweep");
  sc.t_end = 1.0;
  auto base = sc;
  base.eps = 0.0;
  const auto ref = run_scenario(base).snapshots.back().graph;
  std::vector<double> gaps;
  for (double eps : {0.1, 0.05, 0.025}) {
    auto s = sc;
    s.eps = eps;
    gaps.push_back(terminal_gap(run_scenario(s).snapshots.back().graph, ref));
  }
  bool mono = true;
  double order = 1e9;
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    mono = mono && gaps[k] < gaps[k - 1];
    order = std::min(order, std::log2(gaps[k - 1] / gaps[k]));
  }
  return {mono && order >= 1.0, fmt("gaps %.3e %.3e %.3e, monotone %s, min order %.3f (>= 1)", gaps[0], gaps[1],
                                    gaps[2], mono ? "yes" : "no", order)};
}

Outcome c10_dt() {
  auto sc = load("small_bump");
  sc.t_end = 1.0;
  sc.snapshot_cadence = 0.5;
  auto final_state = [&](double dt) {
    auto s = sc;
    s.dt = dt;
    return run_scenario(s).snapshots.back().graph;
  };
  const double dt = 0.02;
  const auto ref = final_state(dt / 8);
  const double e1 = terminal_gap(final_state(dt), ref), e2 = terminal_gap(final_state(dt / 2), ref);
  const double factor = e1 / e2;
  return {std::abs(factor - 4.0) <= 1.0,
          fmt("err(dt=%.3g) %.3e, err(dt/2) %.3e, reduction %.3f (4 +- 1)", dt, e1, e2, factor)};
}

Outcome c11_probes() {
  ProbeConfig cfg;
  const auto s = probe_bounds(cfg);
  double lo = 1e9, hi = 0.0;
  bool finite = true;
  for (const auto& r : s.reports) {
    lo = std::min(lo, r.refinement);
    hi = std::max(hi, r.refinement);
    finite = finite && r.all_finite;
  }
  std::string growth;
  for (std::size_t i = 0; i < s.sweep.betas.size(); ++i)
    growth += fmt("%s%.3f/%.3f", i ? ", " : "", s.sweep.growth[i], s.sweep.c_beta[i]);
  return {s.passed(), fmt("%zu samples, %zu ratios finite=%s, refinement in [%.3f, %.3f], beta-sweep growth/log-weight "
                          "%s, monotone %s",
                          s.samples, s.reports.size(), finite ? "yes" : "no", lo, hi, growth.c_str(),
                          s.sweep.monotone ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
    double budget_s;  // 0: no runtime limit
  };
  const std::vector<Criterion> all{
      {"velocity oracle equivalence", c1_oracle, 120},
      {"mass law", c2_mass, 300},
      {"maximum principle, positivity, support", c3_max_principle, 0},
      {"slope decay rate", c4_slope, 0},
      {"scattering profile", c5_scattering, 0},
      {"Hausdorff collapse", c6_hausdorff, 0},
      {"flow limit", c7_flow, 0},
      {"ellipse oracle", c8_ellipse, 60},
      {"eps-scheme consistency", c9_eps, 0},
      {"time-step convergence order", c10_dt, 0},
      {"operator probes", c11_probes, 0},
  };
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[k].fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (all[k].budget_s > 0 && sec > all[k].budget_s) {
      o.pass = false;
      o.detail += fmt(" [over runtime budget %.0fs]", all[k].budget_s);
    }
    failed += o.pass ? 0 : 1;
    std::printf("C%-2zu %-4s %-40s %s (%.1fs)\n", k + 1, o.pass ? "PASS" : "FAIL", all[k].name, o.detail.c_str(), sec);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", all.size() - failed, all.size());
  return failed ? 1 : 0;
}
