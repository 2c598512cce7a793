#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "aggre/commands.hpp"
#include "aggre/report.hpp"

using namespace aggre;

TEST_CASE("real formatting round-trips") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02e23}) CHECK(std::stod(format_real(v)) == v);
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("oracle csv") {
  const std::string s = oracle_csv({{0.5, "u1", 1.0, 0.75}});
  CHECK(s.rfind("x,quantity,model_value,oracle_value,abs_err\n", 0) == 0);
  CHECK(s.find("0.5,u1,1,0.75,0.25") != std::string::npos);
}

TEST_CASE("run command writes its artifacts and summary") {
  const auto dir = (std::filesystem::temp_directory_path() / "aggre_unit_run").string();
  std::filesystem::remove_all(dir);
  auto sc = parse_scenario(std::string(AGGRE_SCENARIO_DIR) + "/small_bump.json");
  sc.t_end = 0.2;
  const auto r = cmd_run(sc, dir);
  CHECK(r.invariants_ok);
  CHECK(r.exit_code(true) == 0);
  for (const char* f : {"state.json", "monitors.csv", "invariants.json", "snapshots.csv", "velocity.csv"})
    CHECK_MESSAGE(std::filesystem::exists(dir + "/" + f), std::string(f));
  const auto j = nlohmann::json::parse(summary_json(r));
  CHECK(j["exit_code"] == 0);
  std::ifstream st(dir + "/state.json");
  const auto s = nlohmann::json::parse(st);
  CHECK(s["n"] == sc.n);
}

TEST_CASE("failed checks count only in check mode") {
  CommandResult r;
  r.checks.push_back({"x", 2.0, 1.0, "<=", false});
  CHECK(r.exit_code(false) == 0);
  CHECK(r.exit_code(true) == 1);
  r.invariants_ok = false;
  CHECK(r.exit_code(false) == 1);
}
