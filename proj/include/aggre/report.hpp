#pragma once

#include <string>
#include <vector>

#include "aggre/asymptotics.hpp"
#include "aggre/cauchyops.hpp"
#include "aggre/evolve.hpp"
#include "aggre/velocity.hpp"

namespace aggre {

// Numbers are written with 17 significant digits so equal inputs give equal bytes.
std::string format_real(double v);

std::string state_json(const SampledGraph& g);
std::string monitors_csv(const std::vector<MonitorRow>& rows);
std::string invariants_json(const TrajectoryRecord& rec);
std::string velocity_csv(const SampledGraph& g, const VelocityField& v);
std::string snapshots_csv(const TrajectoryRecord& rec);

struct OracleRow {
  double x = 0.0;
  std::string quantity;
  double model = 0.0, oracle = 0.0;
  double abs_err() const;
};
std::string oracle_csv(const std::vector<OracleRow>& rows);

struct AsymptoticsReport {
  LimitProfile profile;
  FlowLimit flow;
  HausdorffFit hausdorff;
  std::vector<WeakRow> weak;
  GReconstruction g;
};
std::string limit_profile_json(const AsymptoticsReport& r);

std::string probe_json(const ProbeSummary& s);

/// Writes text to path, creating parent directories; ErrorCode::Io on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace aggre
