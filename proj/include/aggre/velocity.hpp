#pragma once

#include <vector>

#include "aggre/graphstate.hpp"

namespace aggre {

/// Node-wise velocity data. F and G carry no 1/2pi factor.
struct VelocityField {
  std::vector<double> u1, u2, du1, du2, F, G, R;
};

enum VelocityParts : unsigned {
  kU1 = 1u,
  kU2 = 2u,
  kDerivatives = 4u,  // du1, du2, F, G
  kAllParts = 7u,
};

struct VelocityOptions {
  unsigned parts = kAllParts;
  double support_threshold = 0.0;  // R is set where f exceeds this
  double eps = 0.0;                // > 0 excludes |y| < eps from u1 and u2
};

/// Graph heights at or below this are treated as exactly zero by the kernels.
inline constexpr double kZeroHeight = 1e-150;

VelocityField velocity_field(const SampledGraph& f, const VelocityOptions& opt = {});

double u1_at(const SampledGraph& f, double x);
double u2_at(const SampledGraph& f, double x);

std::vector<double> dx_u1(const SampledGraph& f);
std::vector<double> dx_u2(const SampledGraph& f);
std::vector<double> source_F(const SampledGraph& f);
std::vector<double> source_G(const SampledGraph& f);

struct GDecomposition {
  std::vector<double> linear, L, N;
};
GDecomposition decompose_G(const SampledGraph& f);

std::vector<double> damping_R(const SampledGraph& f, double threshold);

std::vector<double> u1_eps(const SampledGraph& f, double eps);
std::vector<double> u2_eps(const SampledGraph& f, double eps);

}  // namespace aggre
