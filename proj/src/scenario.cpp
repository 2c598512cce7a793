#include "aggre/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aggre/error.hpp"

namespace aggre {

using nlohmann::json;

const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::BumpSum: return "bump_sum";
    case InitialKind::FromSamples: return "from_samples";
    case InitialKind::Ellipse: return "ellipse";
  }
  return "unknown";
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& m : v) s += (s.empty() ? "" : "; ") + m;
  return s;
}

// Collects every schema problem before failing.
struct Reader {
  std::vector<std::string> issues;

  const json* object(const json& parent, const std::string& key, const std::string& path, bool required) {
    if (!parent.contains(key)) {
      if (required) issues.push_back(path + ": missing");
      return nullptr;
    }
    const json& v = parent.at(key);
    if (!v.is_object()) {
      issues.push_back(path + ": expected object");
      return nullptr;
    }
    return &v;
  }

  void number(const json* parent, const std::string& key, const std::string& path, double& out,
              bool required = false) {
    if (!parent || !parent->contains(key)) {
      if (required) issues.push_back(path + ": missing");
      return;
    }
    const json& v = parent->at(key);
    if (!v.is_number()) {
      issues.push_back(path + ": expected number");
      return;
    }
    out = v.get<double>();
    if (!std::isfinite(out)) issues.push_back(path + ": must be finite");
  }

  void integer(const json* parent, const std::string& key, const std::string& path, std::uint64_t& out) {
    if (!parent || !parent->contains(key)) return;
    const json& v = parent->at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      issues.push_back(path + ": expected nonnegative integer");
      return;
    }
    out = v.get<std::uint64_t>();
  }

  void string(const json* parent, const std::string& key, const std::string& path, std::string& out) {
    if (!parent || !parent->contains(key)) return;
    const json& v = parent->at(key);
    if (!v.is_string()) {
      issues.push_back(path + ": expected string");
      return;
    }
    out = v.get<std::string>();
  }
};

const std::vector<std::string> kTopKeys{"name", "initial", "grid", "solver", "outputs", "seed"};

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name_hint) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Schema, std::string("scenario: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::Schema, "scenario: top level must be an object");

  Reader rd;
  Scenario sc;
  sc.name = name_hint;
  for (const auto& [key, _] : doc.items())
    if (std::find(kTopKeys.begin(), kTopKeys.end(), key) == kTopKeys.end())
      rd.issues.push_back(key + ": unknown field");
  rd.string(&doc, "name", "name", sc.name);
  rd.integer(&doc, "seed", "seed", sc.seed);

  if (const json* ini = rd.object(doc, "initial", "initial", true)) {
    std::string kind = "bump_sum";
    rd.string(ini, "kind", "initial.kind", kind);
    if (kind == "bump_sum") {
      sc.kind = InitialKind::BumpSum;
      if (ini->contains("components")) {
        const json& cs = ini->at("components");
        if (!cs.is_array()) {
          rd.issues.push_back("initial.components: expected array");
        } else {
          for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string p = "initial.components[" + std::to_string(i) + "]";
            if (!cs[i].is_object()) {
              rd.issues.push_back(p + ": expected object");
              continue;
            }
            BumpComponent c;
            rd.number(&cs[i], "center", p + ".center", c.center, true);
            rd.number(&cs[i], "halfwidth", p + ".halfwidth", c.halfwidth, true);
            rd.number(&cs[i], "amplitude", p + ".amplitude", c.amplitude, true);
            rd.number(&cs[i], "exponent", p + ".exponent", c.exponent);
            sc.components.push_back(c);
          }
        }
      }
    } else if (kind == "from_samples") {
      sc.kind = InitialKind::FromSamples;
      rd.number(ini, "x_lo", "initial.x_lo", sc.sample_lo, true);
      rd.number(ini, "x_hi", "initial.x_hi", sc.sample_hi, true);
      if (!ini->contains("values") || !ini->at("values").is_array()) {
        rd.issues.push_back("initial.values: expected array of numbers");
      } else {
        for (std::size_t i = 0; i < ini->at("values").size(); ++i) {
          const json& v = ini->at("values")[i];
          if (!v.is_number()) rd.issues.push_back("initial.values[" + std::to_string(i) + "]: expected number");
          else sc.samples.push_back(v.get<double>());
        }
      }
    } else if (kind == "ellipse") {
      sc.kind = InitialKind::Ellipse;
      rd.number(ini, "a", "initial.a", sc.ellipse_a, true);
      rd.number(ini, "b", "initial.b", sc.ellipse_b, true);
    } else {
      rd.issues.push_back("initial.kind: expected bump_sum, from_samples or ellipse");
    }
  }

  if (const json* grid = rd.object(doc, "grid", "grid", false)) {
    std::uint64_t n = sc.n;
    rd.integer(grid, "n", "grid.n", n);
    sc.n = static_cast<std::size_t>(n);
    rd.number(grid, "margin", "grid.margin", sc.margin);
    double lo = 0.0, hi = 0.0;
    if (grid->contains("x_lo")) {
      rd.number(grid, "x_lo", "grid.x_lo", lo);
      sc.x_lo = lo;
    }
    if (grid->contains("x_hi")) {
      rd.number(grid, "x_hi", "grid.x_hi", hi);
      sc.x_hi = hi;
    }
  }

  if (const json* sol = rd.object(doc, "solver", "solver", false)) {
    rd.number(sol, "dt", "solver.dt", sc.dt);
    rd.number(sol, "t_end", "solver.t_end", sc.t_end);
    rd.number(sol, "eps", "solver.eps", sc.eps);
    std::string mode = to_string(sc.mode);
    rd.string(sol, "mode", "solver.mode", mode);
    if (mode == "plain") sc.mode = Mode::Plain;
    else if (mode == "rescaled") sc.mode = Mode::Rescaled;
    else rd.issues.push_back("solver.mode: expected plain or rescaled");
  }

  if (const json* out = rd.object(doc, "outputs", "outputs", false)) {
    rd.number(out, "snapshot_cadence", "outputs.snapshot_cadence", sc.snapshot_cadence);
    rd.string(out, "directory", "outputs.directory", sc.directory);
  }
  if (sc.directory.empty()) sc.directory = "out/" + sc.name;

  // Ranges that make the document meaningless regardless of the hypotheses.
  if (sc.n < 5) rd.issues.push_back("grid.n: must be at least 5");
  if (sc.margin < 0.0) rd.issues.push_back("grid.margin: must be >= 0");
  if (!(sc.dt > 0.0)) rd.issues.push_back("solver.dt: must be > 0");
  if (!(sc.t_end >= 0.0)) rd.issues.push_back("solver.t_end: must be >= 0");
  if (!(sc.eps >= 0.0)) rd.issues.push_back("solver.eps: must be >= 0");
  if (!(sc.snapshot_cadence > 0.0)) rd.issues.push_back("outputs.snapshot_cadence: must be > 0");
  if (sc.kind == InitialKind::FromSamples && sc.samples.size() < 5)
    rd.issues.push_back("initial.values: need at least 5 samples");

  if (!rd.issues.empty()) fail(ErrorCode::Schema, "scenario '" + sc.name + "': " + join(rd.issues));
  validate_scenario(sc);
  return sc;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "scenario: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), std::filesystem::path(path).stem().string());
}

Interval scenario_domain(const Scenario& sc) {
  double lo = 0.0, hi = 0.0;
  switch (sc.kind) {
    case InitialKind::BumpSum:
      if (sc.components.empty()) {
        lo = -1.0;
        hi = 1.0;
      } else {
        lo = sc.components.front().center - sc.components.front().halfwidth;
        hi = sc.components.front().center + sc.components.front().halfwidth;
        for (const auto& c : sc.components) {
          lo = std::min(lo, c.center - c.halfwidth);
          hi = std::max(hi, c.center + c.halfwidth);
        }
      }
      break;
    case InitialKind::FromSamples:
      lo = sc.sample_lo;
      hi = sc.sample_hi;
      break;
    case InitialKind::Ellipse:
      lo = -sc.ellipse_a;
      hi = sc.ellipse_a;
      break;
  }
  return {sc.x_lo.value_or(lo - sc.margin), sc.x_hi.value_or(hi + sc.margin)};
}

double initial_value(const Scenario& sc, double x) {
  switch (sc.kind) {
    case InitialKind::BumpSum: {
      double s = 0.0;
      for (const auto& c : sc.components) {
        const double u = (x - c.center) / c.halfwidth;
        if (std::abs(u) < 1.0) s += c.amplitude * std::pow(1.0 - u * u, c.exponent);
      }
      return s;
    }
    case InitialKind::FromSamples: {
      SampledGraph g{sc.sample_lo, sc.sample_hi, sc.samples.size(), 0.0, sc.samples};
      return interpolate(g, x);
    }
    case InitialKind::Ellipse: {
      const double u = x / sc.ellipse_a;
      return std::abs(u) < 1.0 ? sc.ellipse_b * std::sqrt(1.0 - u * u) : 0.0;
    }
  }
  return 0.0;
}

SampledGraph initial_graph(const Scenario& sc, std::size_t n_override) {
  const Interval d = scenario_domain(sc);
  const std::size_t n = n_override ? n_override : sc.n;
  SampledGraph g = SampledGraph::sample(d.lo, d.hi, n, [&](double x) { return initial_value(sc, x); });
  // The hull endpoints are zeros of the profile; keep them exact.
  if (g.values.front() < 1e-300) g.values.front() = 0.0;
  if (g.values.back() < 1e-300) g.values.back() = 0.0;
  return g;
}

PatchProfile scenario_patch(const Scenario& sc) {
  const Interval d = scenario_domain(sc);
  PatchProfile p;
  p.lo = d.lo;
  p.hi = d.hi;
  if (sc.kind == InitialKind::FromSamples) {
    const SampledGraph g{sc.sample_lo, sc.sample_hi, sc.samples.size(), 0.0, sc.samples};
    p.f = [g](double x) { return interpolate(g, x); };
    for (std::size_t i = 0; i < g.n; ++i) p.breaks.push_back(g.x(i));
    return p;
  }
  p.f = [sc](double x) { return initial_value(sc, x); };
  for (const auto& c : sc.components) {
    p.breaks.push_back(c.center - c.halfwidth);
    p.breaks.push_back(c.center + c.halfwidth);
  }
  return p;
}

void validate_scenario(const Scenario& sc) {
  std::vector<std::string> bad;
  const Interval d = scenario_domain(sc);
  if (!(d.hi > d.lo)) fail(ErrorCode::Schema, "scenario '" + sc.name + "': grid: empty domain");

  if (sc.kind == InitialKind::BumpSum) {
    for (std::size_t i = 0; i < sc.components.size(); ++i) {
      const auto& c = sc.components[i];
      const std::string p = "initial.components[" + std::to_string(i) + "]";
      if (!(c.amplitude > 0.0)) bad.push_back(p + ".amplitude: positivity (f0 > 0 on its support) requires amplitude > 0");
      if (!(c.halfwidth > 0.0)) bad.push_back(p + ".halfwidth: compact support requires halfwidth > 0");
      if (!(c.exponent >= 2.0)) bad.push_back(p + ".exponent: C^1 slope regularity requires exponent >= 2");
      if (c.center - c.halfwidth < d.lo || c.center + c.halfwidth > d.hi)
        bad.push_back(p + ": compact support must lie inside the grid");
    }
    std::vector<BumpComponent> cs = sc.components;
    std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.center < b.center; });
    for (std::size_t i = 1; i < cs.size(); ++i)
      if (cs[i - 1].center + cs[i - 1].halfwidth >= cs[i].center - cs[i].halfwidth)
        bad.push_back("initial.components: disjoint supports violated between components centered at " +
                      std::to_string(cs[i - 1].center) + " and " + std::to_string(cs[i].center));
  } else if (sc.kind == InitialKind::FromSamples) {
    for (std::size_t i = 0; i < sc.samples.size(); ++i)
      if (!(sc.samples[i] >= 0.0) || !std::isfinite(sc.samples[i]))
        bad.push_back("initial.values[" + std::to_string(i) + "]: positivity requires finite values >= 0");
    if (!sc.samples.empty() && (sc.samples.front() != 0.0 || sc.samples.back() != 0.0))
      bad.push_back("initial.values: compact support requires zero end samples");
    if (sc.sample_lo < d.lo || sc.sample_hi > d.hi || !(sc.sample_hi > sc.sample_lo))
      bad.push_back("initial.x_lo/x_hi: sampled interval must lie inside the grid");
  } else {
    if (!(sc.ellipse_b > 0.0) || sc.ellipse_a < sc.ellipse_b)
      bad.push_back("initial.a/b: ellipse requires a >= b > 0");
    if (-sc.ellipse_a < d.lo || sc.ellipse_a > d.hi) bad.push_back("initial.a: ellipse must lie inside the grid");
  }
  if (!bad.empty()) fail(ErrorCode::Hypothesis, "scenario '" + sc.name + "': " + join(bad));

  const SampledGraph f0 = initial_graph(sc);
  const auto v = velocity_field(f0, {kU1, 0.0, 0.0});
  double u = 0.0;
  for (double x : v.u1) u = std::max(u, std::abs(x));
  const double dt_max = cfl_dt_max(f0, u);
  if (sc.dt > dt_max) {
    std::ostringstream os;
    os.precision(6);
    os << "scenario '" << sc.name << "': solver.dt = " << sc.dt << " exceeds the CFL bound dt_max = " << dt_max;
    fail(ErrorCode::Cfl, os.str());
  }
}

RunConfig run_config(const Scenario& sc) {
  RunConfig c;
  c.dt = sc.dt;
  c.t_end = sc.t_end;
  c.mode = sc.mode;
  c.eps = sc.eps;
  c.snapshot_every = sc.snapshot_cadence;
  return c;
}

TrajectoryRecord run_scenario(const Scenario& sc) { return run(initial_graph(sc), run_config(sc)); }

}  // namespace aggre
