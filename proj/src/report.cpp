#include "aggre/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "aggre/error.hpp"

namespace aggre {

using ojson = nlohmann::ordered_json;

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// JSON has no inf/nan; those are written as null.
ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson nums(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

ojson intervals(const std::vector<Interval>& iv) {
  ojson a = ojson::array();
  for (const auto& i : iv) a.push_back({num(i.lo), num(i.hi)});
  return a;
}

ojson graph(const SampledGraph& g) {
  return {{"x_lo", num(g.x_lo)}, {"x_hi", num(g.x_hi)}, {"n", g.n}, {"time", num(g.time)}, {"values", nums(g.values)}};
}

ojson flow(const FlowMap& f) {
  return {{"x0", nums(f.x0)}, {"x", nums(f.x)}, {"J", nums(f.J)}, {"int_R", nums(f.int_R)}};
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

std::string row(std::initializer_list<double> v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + format_real(x);
  return s + "\n";
}

}  // namespace

std::string state_json(const SampledGraph& g) { return dump(graph(g)); }

std::string monitors_csv(const std::vector<MonitorRow>& rows) {
  std::string s =
      "time,mass_et,linf,slope_linf,R_linf,a_t,b_t,grid_lo,grid_hi,min_support,J_min,J_max,clamped_mass,vel_linf\n";
  for (const auto& m : rows)
    s += row({m.time, m.mass_et, m.linf, m.slope_linf, m.R_linf, m.a_t, m.b_t, m.grid_lo, m.grid_hi,
              m.min_support, m.J_min, m.J_max, m.clamped_mass, m.vel_linf});
  return s;
}

std::string invariants_json(const TrajectoryRecord& rec) {
  ojson inv = ojson::array();
  for (const auto& s : rec.invariants)
    inv.push_back({{"name", s.name},
                   {"tolerance", num(s.tolerance)},
                   {"max_violation", num(s.max_violation)},
                   {"time_of_max", num(s.time_of_max)},
                   {"passed", s.passed()}});
  ojson j;
  j["ok"] = rec.ok();
  j["failure"] = rec.failure;
  j["failed_invariant"] = rec.failed_invariant;
  j["t_reached"] = num(rec.monitors.empty() ? 0.0 : rec.monitors.back().time);
  j["initial_support"] = intervals(rec.initial_support);
  j["invariants"] = inv;
  return dump(j);
}

std::string velocity_csv(const SampledGraph& g, const VelocityField& v) {
  std::string s = "x,f,u1,u2,du1,du2,F,G,R\n";
  for (std::size_t i = 0; i < g.n; ++i)
    s += row({g.x(i), g.values[i], v.u1[i], v.u2[i], v.du1[i], v.du2[i], v.F[i], v.G[i], v.R[i]});
  return s;
}

std::string snapshots_csv(const TrajectoryRecord& rec) {
  std::string s = "time,x,f\n";
  for (const auto& sn : rec.snapshots)
    for (std::size_t i = 0; i < sn.graph.n; ++i) s += row({sn.time, sn.graph.x(i), sn.graph.values[i]});
  return s;
}

double OracleRow::abs_err() const { return std::abs(model - oracle); }

std::string oracle_csv(const std::vector<OracleRow>& rows) {
  std::string s = "x,quantity,model_value,oracle_value,abs_err\n";
  for (const auto& r : rows)
    s += format_real(r.x) + "," + r.quantity + "," + format_real(r.model) + "," + format_real(r.oracle) + "," +
         format_real(r.abs_err()) + "\n";
  return s;
}

std::string limit_profile_json(const AsymptoticsReport& r) {
  const auto& p = r.profile;
  ojson g_exp = ojson::array();
  for (std::size_t i = 0; i < p.g.size(); ++i) g_exp.push_back(p.g_mask[i] ? num(p.g[i]) : ojson(nullptr));
  ojson rates = ojson::object();
  for (const auto& [k, v] : p.rates) rates[k] = num(v);

  ojson weak = ojson::array();
  for (const auto& w : r.weak)
    weak.push_back({{"name", w.name},
                    {"target", num(w.target)},
                    {"times", nums(w.times)},
                    {"gaps", nums(w.gaps)},
                    {"gap_rate", num(w.gap_rate)}});

  ojson j;
  j["phi"] = graph(p.phi);
  j["psi_inf"] = flow(p.psi_inf);
  j["K_inf"] = intervals(p.K_inf);
  j["components"] = p.K_inf.size();
  j["g_exponent"] = g_exp;
  j["cauchy_gap"] = num(p.cauchy_gap);
  j["gap_times"] = nums(p.gap_times);
  j["gaps"] = nums(p.gaps);
  j["mass_ratio"] = num(p.mass_ratio);
  j["rates"] = rates;
  j["flow"] = {{"times", nums(r.flow.times)},
               {"increments", nums(r.flow.increments)},
               {"increment_rate", num(r.flow.increment_rate)},
               {"J_min", num(r.flow.J_min)},
               {"J_max", num(r.flow.J_max)},
               {"monotone", r.flow.monotone}};
  j["hausdorff"] = {{"times", nums(r.hausdorff.times)},
                    {"d_H", nums(r.hausdorff.d_H)},
                    {"rate", num(r.hausdorff.fit.slope)},
                    {"r2", num(r.hausdorff.fit.r2)},
                    {"nonincreasing", r.hausdorff.nonincreasing}};
  j["weak_convergence"] = weak;
  j["g_reconstruction"] = {{"x", nums(r.g.x)},
                           {"g_alg", nums(r.g.g_alg)},
                           {"g_time", nums(r.g.g_time)},
                           {"max_gap", num(r.g.max_gap)},
                           {"normalization", num(r.g.normalization)}};
  return dump(j);
}

std::string probe_json(const ProbeSummary& s) {
  ojson reps = ojson::array();
  for (const auto& r : s.reports) {
    ojson params = ojson::object();
    for (const auto& [k, v] : r.params) params[k] = num(v);
    reps.push_back({{"op", r.op},
                    {"bound", r.bound},
                    {"params", params},
                    {"samples", r.samples},
                    {"max_ratio", num(r.max_ratio)},
                    {"max_ratio_coarse", num(r.max_ratio_coarse)},
                    {"refinement", num(r.refinement)},
                    {"all_finite", r.all_finite},
                    {"passed", r.passed()}});
  }
  ojson j;
  j["seed"] = s.seed;
  j["samples"] = s.samples;
  j["passed"] = s.passed();
  j["reports"] = reps;
  j["beta_sweep"] = {{"alpha", num(s.sweep.alpha)},
                     {"betas", nums(s.sweep.betas)},
                     {"max_ratio", nums(s.sweep.max_ratio)},
                     {"growth", nums(s.sweep.growth)},
                     {"c_beta", nums(s.sweep.c_beta)},
                     {"monotone", s.sweep.monotone},
                     {"within_log", s.sweep.within_log}};
  return dump(j);
}

void write_text(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for " + path);
}

}  // namespace aggre
