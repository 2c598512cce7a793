#include "aggre/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

#include "aggre/error.hpp"

namespace aggre {

namespace {

Check check_le(std::string name, double value, double limit) {
  return {std::move(name), value, limit, "<=", std::isfinite(value) && value <= limit};
}

Check check_ge(std::string name, double value, double limit) {
  return {std::move(name), value, limit, ">=", std::isfinite(value) && value >= limit};
}

Check check_lt(std::string name, double value, double limit) {
  return {std::move(name), value, limit, "<", std::isfinite(value) && value < limit};
}

std::string join_path(const std::string& dir, const std::string& file) {
  return dir.empty() ? file : dir + "/" + file;
}

void emit(CommandResult& r, const std::string& dir, const std::string& file, const std::string& text) {
  const std::string p = join_path(dir, file);
  write_text(p, text);
  r.artifacts.push_back(file);
}

void record_run(CommandResult& r, const TrajectoryRecord& rec, const std::string& dir) {
  r.invariants_ok = rec.ok();
  r.failed_invariant = rec.failed_invariant;
  r.failure = rec.failure;
  const SampledGraph& last = rec.snapshots.empty() ? rec.initial : rec.snapshots.back().graph;
  emit(r, dir, "state.json", state_json(last));
  emit(r, dir, "monitors.csv", monitors_csv(rec.monitors));
  emit(r, dir, "invariants.json", invariants_json(rec));
  emit(r, dir, "snapshots.csv", snapshots_csv(rec));
  emit(r, dir, "velocity.csv", velocity_csv(last, velocity_field(last)));
}

// Monitors that are reported but do not stop a run become checks. The
// truncated kernels do not conserve e^t mass, so eps runs skip that one.
void soft_invariants(CommandResult& r, const TrajectoryRecord& rec) {
  for (const char* name : {"jacobian_band", "mass_law"}) {
    if (rec.config.eps > 0.0 && std::string(name) == "mass_law") continue;
    if (const InvariantStat* s = rec.invariant(name)) r.checks.push_back(check_le(name, s->max_violation, s->tolerance));
  }
}

CommandResult start(const char* command, const std::string& scenario) {
  CommandResult r;
  r.command = command;
  r.scenario = scenario;
  return r;
}

}  // namespace

bool CommandResult::checks_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

int CommandResult::exit_code(bool check_mode) const {
  if (!invariants_ok) return 1;
  if (check_mode && !checks_ok()) return 1;
  return 0;
}

CommandResult cmd_run(const Scenario& sc, const std::string& out_dir) {
  CommandResult r = start("run", sc.name);
  const TrajectoryRecord rec = run_scenario(sc);
  record_run(r, rec, out_dir);
  soft_invariants(r, rec);
  return r;
}

CommandResult cmd_asymptotics(const Scenario& sc, const std::string& out_dir) {
  CommandResult r = start("asymptotics", sc.name);
  const TrajectoryRecord rec = run_scenario(sc);
  record_run(r, rec, out_dir);
  soft_invariants(r, rec);
  if (!rec.ok() || rec.initial_support.empty()) return r;

  AsymptoticsReport rep;
  rep.profile = scattering_profile(rec);
  rep.flow = limit_flow(rec);
  const double t_end = rec.monitors.back().time;
  if (t_end >= 4.0) rep.hausdorff = hausdorff_decay(rec, rep.profile.K_inf, 1.0, t_end - 2.0);
  rep.weak = weak_convergence_test(rec, rep.profile, default_test_functions());
  rep.g = reconstruct_g(rep.profile, rec.initial);
  emit(r, out_dir, "limit_profile.json", limit_profile_json(rep));

  const auto& p = rep.profile;
  if (p.rates.count("gap_ratio_max")) r.checks.push_back(check_lt("cauchy_gap_ratio", p.rates.at("gap_ratio_max"), 1.0));
  r.checks.push_back(check_le("mass_ratio", std::abs(p.mass_ratio - 1.0), 1e-3));
  r.checks.push_back(check_le("g_dual_reconstruction", rep.g.max_gap, 1e-2));
  Check comps{"limit_components", static_cast<double>(p.K_inf.size()),
              static_cast<double>(rec.initial_support.size()), "==",
              p.K_inf.size() == rec.initial_support.size() && intervals_disjoint(p.K_inf)};
  r.checks.push_back(comps);
  if (comps.passed) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.K_inf.size(); ++i)
      worst = std::min(worst, p.K_inf[i].length() / rec.initial_support[i].length());
    r.checks.push_back(check_ge("component_half_length", worst, 0.5));
  }
  r.checks.push_back(check_le("flow_increment_rate", rep.flow.increment_rate, -0.4));
  r.checks.push_back(check_ge("jacobian_min", rep.flow.J_min, 0.5));
  r.checks.push_back(check_le("jacobian_max", rep.flow.J_max, 1.5));
  if (t_end >= 4.0) r.checks.push_back(check_le("hausdorff_rate_dev", std::abs(rep.hausdorff.fit.slope + 1.0), 0.15));
  return r;
}

std::vector<OracleRow> velocity_oracle_rows(const Scenario& sc, std::size_t n, std::size_t count,
                                            std::uint64_t seed) {
  const SampledGraph f = initial_graph(sc, n);
  const PatchProfile patch = scenario_patch(sc);
  std::vector<Interval> parts;
  if (sc.kind == InitialKind::BumpSum) {
    for (const auto& c : sc.components) parts.push_back({c.center - c.halfwidth, c.center + c.halfwidth});
  } else {
    parts = support_components(f, 0.0);
  }
  std::vector<OracleRow> rows;
  if (parts.empty()) return rows;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < count; ++k) {
    const Interval& c = parts[static_cast<std::size_t>(rng() % parts.size())];
    const double mid = 0.5 * (c.lo + c.hi), half = 0.5 * c.length();
    const double x = mid + half * 0.98 * (2.0 * unit(rng) - 1.0);
    const Vec2 o = biot_savart_patch(patch, {x, patch.f(x)});
    rows.push_back({x, "u1", u1_at(f, x), o.x});
    rows.push_back({x, "u2", u2_at(f, x), o.y});
  }
  return rows;
}

EllipseSuite ellipse_suite(double a0, double b0, std::uint64_t seed) {
  EllipseSuite s;
  const double dt = 1e-3;
  EllipseState e{a0, b0, 0.0};
  const double c0 = a0 - b0, area0 = a0 * b0;
  const int steps = 10000;  // tau in [0, 10]
  for (int k = 1; k <= steps; ++k) {
    e = ellipse_ode_step(e, dt);
    s.axes_drift = std::max(s.axes_drift, std::abs((e.a - e.b) - c0));
    const double ref = area0 * std::exp(-e.time);
    s.area_rel_err = std::max(s.area_rel_err, std::abs(e.a * e.b - ref) / ref);
    if (c0 == 0.0) s.radius_rel_err = std::max(s.radius_rel_err, std::abs(e.a / (a0 * std::exp(-0.5 * e.time)) - 1.0));
    if (k == 6000 && c0 > 0.0) {
      const double x0 = c0;
      // semicircle and marginal on a common fine grid covering both supports
      const double span = std::max(e.a, x0);
      for (int i = 0; i <= 4000; ++i) {
        const double x = -span + 2.0 * span * i / 4000.0;
        s.marginal_gap = std::max(s.marginal_gap, std::abs(ellipse_marginal(e, x) - semicircle_density(x0, x)));
      }
    }
  }
  // The linear interior field checked against the quadrature oracle.
  const EllipseState e0{a0, b0, 0.0};
  const PatchProfile patch = ellipse_profile(e0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const double r = 0.9 * std::sqrt(unit(rng)), th = 2.0 * M_PI * unit(rng);
    const Vec2 p{a0 * r * std::cos(th), b0 * r * std::sin(th)};
    const Vec2 lin = ellipse_interior_field(e0, p);
    const Vec2 o = biot_savart_patch(patch, p);
    s.rows.push_back({p.x, "v1@y=" + format_real(p.y), lin.x, o.x});
    s.rows.push_back({p.x, "v2@y=" + format_real(p.y), lin.y, o.y});
    s.field_err = std::max({s.field_err, std::abs(lin.x - o.x), std::abs(lin.y - o.y)});
  }
  return s;
}

CommandResult cmd_oracle_check(const Scenario& sc, const std::string& out_dir, std::uint64_t seed,
                               std::size_t n_override) {
  CommandResult r = start("oracle-check", sc.name);
  if (sc.kind == InitialKind::Ellipse) {
    const EllipseSuite s = ellipse_suite(sc.ellipse_a, sc.ellipse_b, seed);
    emit(r, out_dir, "oracle.csv", oracle_csv(s.rows));
    r.checks.push_back(check_le("ellipse_field", s.field_err, 1e-4));
    r.checks.push_back(check_le("ellipse_axes_drift", s.axes_drift, 1e-10));
    r.checks.push_back(check_le("ellipse_area_law", s.area_rel_err, 1e-8));
    if (sc.ellipse_a == sc.ellipse_b) r.checks.push_back(check_le("disc_radius_law", s.radius_rel_err, 1e-8));
    else r.checks.push_back(check_le("ellipse_marginal_semicircle", s.marginal_gap, 2e-2));
    return r;
  }
  const auto rows = velocity_oracle_rows(sc, n_override ? n_override : sc.n, 20, seed);
  emit(r, out_dir, "oracle.csv", oracle_csv(rows));
  double worst = 0.0;
  for (const auto& row : rows) worst = std::max(worst, row.abs_err());
  r.checks.push_back(check_le("velocity_oracle", worst, 1e-4));
  return r;
}

CommandResult cmd_probe(std::uint64_t seed, std::size_t samples, const std::string& out_dir) {
  CommandResult r = start("probe", "operator_probes");
  ProbeConfig cfg;
  cfg.seed = seed;
  cfg.samples = samples;
  const ProbeSummary s = probe_bounds(cfg);
  emit(r, out_dir, "probe.json", probe_json(s));
  for (const auto& rep : s.reports) {
    std::string name = rep.op + ":" + rep.bound;
    for (const auto& [k, v] : rep.params) name += ":" + k + "=" + format_real(v);
    Check c{name, rep.refinement, 2.0, "in [0.5,2]", rep.passed()};
    r.checks.push_back(c);
  }
  r.checks.push_back({"beta_sweep_monotone", s.sweep.monotone ? 1.0 : 0.0, 1.0, "==", s.sweep.monotone});
  r.checks.push_back({"beta_sweep_within_log", s.sweep.within_log ? 1.0 : 0.0, 1.0, "==", s.sweep.within_log});
  return r;
}

std::string summary_json(const CommandResult& r) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", std::isfinite(c.value) ? nlohmann::ordered_json(c.value) : nlohmann::ordered_json(nullptr)},
                      {"limit", c.limit},
                      {"relation", c.relation},
                      {"passed", c.passed}});
  nlohmann::ordered_json failed = nlohmann::ordered_json::array();
  if (!r.invariants_ok) failed.push_back(r.failed_invariant);
  for (const auto& c : r.checks)
    if (!c.passed) failed.push_back(c.name);
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["scenario"] = r.scenario;
  j["exit_code"] = r.exit_code(false);
  j["exit_code_check"] = r.exit_code(true);
  j["invariants_ok"] = r.invariants_ok;
  j["failure"] = r.failure;
  j["failed"] = failed;
  j["checks"] = checks;
  j["artifacts"] = r.artifacts;
  return j.dump(2) + "\n";
}

}  // namespace aggre
