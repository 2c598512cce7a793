#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aggre/graphstate.hpp"

namespace aggre {

enum class CauchyPart { Re, Im };

/// Truncated bilinear curved Cauchy operator over the window [-M, M], M the
/// grid width. g and h must live on the grid of f; values off the grid are 0.
std::vector<double> cauchy_bilinear(const SampledGraph& f, const SampledGraph& g,
                                    const SampledGraph& h, double theta, CauchyPart part);

/// p.v. of y g(ax + by) / (y^2 + (f(x) + f(x+y))^2), evaluated on the grid of f
/// with the +-y pairing done before quadrature. g may use its own grid.
std::vector<double> t_operator(const SampledGraph& f, const SampledGraph& g, double alpha,
                               double beta);

/// Sum of amplitude (1 - ((x - c)/w)^2)^3 terms; C^2 with compact support.
struct BumpSum {
  struct Term {
    double amplitude, center, width;
  };
  std::vector<Term> terms;
  double operator()(double x) const;
};

struct ProbeConfig {
  std::size_t samples = 50;
  std::uint64_t seed = 20240601;
  std::size_t coarse_n = 129;
  std::size_t fine_n = 257;
  double x_lo = -1.0, x_hi = 1.0;
  double s = 0.5;  // Holder exponent of the X = C^s norms
  std::vector<double> thetas{1.0, 0.5};
  std::vector<std::pair<double, double>> alpha_beta{{1.0, 1.0}, {0.5, 0.5}, {0.0, 1.0}, {1.0, 0.0}};
  std::vector<double> beta_sweep{1.0, 0.1, 0.01};
  double sweep_alpha = 1.0;
};

struct OperatorProbeReport {
  std::string op;     // C_re | C_im | T_alpha_beta
  std::string bound;  // which norm inequality the ratio is taken against
  std::map<std::string, double> params;
  std::size_t samples = 0;
  double max_ratio = 0.0;         // fine grid
  double max_ratio_coarse = 0.0;  // coarse grid
  double refinement = 0.0;        // fine / coarse
  bool all_finite = true;

  bool passed() const { return all_finite && refinement >= 0.5 && refinement <= 2.0; }
};

/// Growth of max |f' T g|_D / (|f'|_D |g|_D) as beta shrinks, compared against
/// the logarithmic weight 1 - ln(beta).
struct BetaSweep {
  double alpha = 1.0;
  std::vector<double> betas, max_ratio, growth, c_beta;
  bool monotone = false;
  bool within_log = false;

  bool passed() const { return monotone && within_log; }
};

struct ProbeSummary {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<OperatorProbeReport> reports;
  BetaSweep sweep;

  bool passed() const;
};

/// Random positive f (1-3 bumps) and signed g, h drawn from one generator.
struct ProbeFamily {
  BumpSum f, g, h;
};
std::vector<ProbeFamily> probe_family(std::size_t count, std::uint64_t seed);

/// Named bound ratios of a single sample; 0 when the numerator vanishes.
std::map<std::string, double> sample_ratios(const SampledGraph& f, const SampledGraph& g,
                                            const SampledGraph& h, const ProbeConfig& cfg);

ProbeSummary probe_bounds(const ProbeConfig& cfg);

}  // namespace aggre
