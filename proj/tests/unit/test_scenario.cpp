#include <cmath>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "aggre/error.hpp"
#include "aggre/scenario.hpp"

using namespace aggre;

namespace {

std::string dir() { return AGGRE_SCENARIO_DIR; }

Error error_of(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("scenario accepted");
  return Error(ErrorCode::Io, "");
}

}  // namespace

TEST_CASE("shipped scenarios parse") {
  for (const char* name : {"small_bump", "two_bump", "eps_sweep", "ellipse_2_1", "disc"}) {
    const auto sc = parse_scenario(dir() + "/" + name + ".json");
    CHECK(sc.name == name);
    CHECK(sc.directory == std::string("out/") + name);
    const auto g = initial_graph(sc);
    CHECK(g.n == sc.n);
    CHECK(g.values.front() == 0.0);
    CHECK(g.values.back() == 0.0);
  }
  const auto two = parse_scenario(dir() + "/two_bump.json");
  CHECK(two.components.size() == 2);
  CHECK(two.mode == Mode::Rescaled);
  const auto d = scenario_domain(two);
  CHECK(d.lo == doctest::Approx(-1.0));
  CHECK(d.hi == doctest::Approx(1.0));
}

TEST_CASE("defaults") {
  const auto sc = parse_scenario_text(R"({"name": "d", "initial": {"components": [{"center": 0, "halfwidth": 1, "amplitude": 0.1}]}})");
  CHECK(sc.kind == InitialKind::BumpSum);
  CHECK(sc.n == 257);
  CHECK(sc.dt == doctest::Approx(0.01));
  CHECK(sc.mode == Mode::Plain);
  CHECK(sc.components[0].exponent == 3.0);
  CHECK(sc.directory == "out/d");
  CHECK(initial_value(sc, 0.0) == doctest::Approx(0.1));
  CHECK(initial_value(sc, 1.5) == 0.0);
  const auto cfg = run_config(sc);
  CHECK(cfg.dt == sc.dt);
  CHECK(cfg.t_end == sc.t_end);
}

TEST_CASE("schema problems are all reported with field paths") {
  const auto e = error_of(R"({"name": 3, "initial": {"components": [{"center": "a", "halfwidth": 1}]},
                              "grid": {"n": -4}, "solver": {"mode": "fast"}, "extra": 1})");
  CHECK(e.code() == ErrorCode::Schema);
  const std::string m = e.what();
  for (const char* path : {"name", "initial.components[0].center", "initial.components[0].amplitude", "grid.n",
                           "solver.mode", "extra"})
    CHECK_MESSAGE(m.find(path) != std::string::npos, path);
  CHECK(error_of("{not json").code() == ErrorCode::Schema);
}

TEST_CASE("hypothesis violations name the hypothesis") {
  auto overlap = error_of(R"({"name": "o", "initial": {"components": [
      {"center": 0, "halfwidth": 0.5, "amplitude": 0.1}, {"center": 0.4, "halfwidth": 0.5, "amplitude": 0.1}]}})");
  CHECK(overlap.code() == ErrorCode::Hypothesis);
  CHECK(std::string(overlap.what()).find("disjoint") != std::string::npos);

  auto neg = error_of(R"({"name": "n", "initial": {"components": [{"center": 0, "halfwidth": 1, "amplitude": -0.1}]}})");
  CHECK(neg.code() == ErrorCode::Hypothesis);
  CHECK(std::string(neg.what()).find("positiv") != std::string::npos);

  auto rough = error_of(R"({"name": "r", "initial": {"components": [{"center": 0, "halfwidth": 1, "amplitude": 0.1, "exponent": 1}]}})");
  CHECK(rough.code() == ErrorCode::Hypothesis);
}

TEST_CASE("dt above the CFL bound is rejected with the bound") {
  const auto e = error_of(R"({"name": "c", "initial": {"components": [{"center": 0, "halfwidth": 1, "amplitude": 0.1}]},
                             "solver": {"dt": 5}})");
  CHECK(e.code() == ErrorCode::Cfl);
  CHECK(std::string(e.what()).find("dt_max") != std::string::npos);
}

TEST_CASE("runs are deterministic") {
  auto sc = parse_scenario(dir() + "/small_bump.json");
  sc.t_end = 0.3;
  const auto a = run_scenario(sc), b = run_scenario(sc);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k)
    CHECK(a.snapshots[k].graph.values == b.snapshots[k].graph.values);
}

TEST_CASE("from_samples and ellipse kinds") {
  const auto s = parse_scenario_text(R"({"name": "s", "initial": {"kind": "from_samples", "x_lo": -1, "x_hi": 1,
      "values": [0, 0.02, 0.05, 0.02, 0]}, "grid": {"n": 33}})");
  CHECK(s.kind == InitialKind::FromSamples);
  CHECK(initial_value(s, 0.0) == doctest::Approx(0.05));
  const auto e = parse_scenario(dir() + "/ellipse_2_1.json");
  CHECK(e.kind == InitialKind::Ellipse);
  CHECK(initial_value(e, 0.0) == doctest::Approx(1.0));
  CHECK(scenario_patch(e).f(1.0) == doctest::Approx(std::sqrt(0.75)));
}
