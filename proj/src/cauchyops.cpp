#include "aggre/cauchyops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "aggre/error.hpp"
#include "aggre/parallel.hpp"
#include "aggre/quadrature.hpp"

namespace aggre {

namespace {

void reject_nan(const SampledGraph& g, const char* what) {
  for (double v : g.values)
    if (!std::isfinite(v)) fail(ErrorCode::Numeric, what);
}

void check_output(const std::vector<double>& out, const char* what) {
  for (double v : out)
    if (!std::isfinite(v)) fail(ErrorCode::Numeric, what);
}

bool same_grid(const SampledGraph& a, const SampledGraph& b) {
  return a.n == b.n && a.x_lo == b.x_lo && a.x_hi == b.x_hi;
}

double on_grid(const SampledGraph& g, long j) {
  return (j < 0 || j >= static_cast<long>(g.n)) ? 0.0 : g.values[static_cast<std::size_t>(j)];
}

}  // namespace

std::vector<double> cauchy_bilinear(const SampledGraph& f, const SampledGraph& g,
                                    const SampledGraph& h, double theta, CauchyPart part) {
  require(theta >= 0.0 && theta <= 1.0, "cauchy_bilinear: theta must lie in [0,1]");
  require(f.n >= 3, "cauchy_bilinear: need n >= 3");
  require(same_grid(f, g) && same_grid(f, h), "cauchy_bilinear: g and h must share the grid of f");
  reject_nan(f, "cauchy_bilinear: non-finite f");
  reject_nan(g, "cauchy_bilinear: non-finite g");
  reject_nan(h, "cauchy_bilinear: non-finite h");

  const long n = static_cast<long>(f.n);
  const double dx = f.h();
  const auto w = simpson_weights(static_cast<std::size_t>(2 * (n - 1)), dx);
  std::vector<double> out(f.n, 0.0);
  if (theta == 0.0) return out;

  parallel_for(f.n, [&](std::size_t ii) {
    const long i = static_cast<long>(ii);
    const double x = f.x(ii);
    const double fi = f.values[ii], gi = g.values[ii], hi = h.values[ii];
    double acc = 0.0;
    for (long k = -(n - 1); k <= n - 1; ++k) {
      if (k == 0) continue;  // removable: the numerator vanishes to second order
      const double y = static_cast<double>(k) * dx;
      const double df = on_grid(f, i + k) - fi;
      const double dh = on_grid(h, i + k) - hi;
      if (dh == 0.0) continue;
      const double dg = interpolate_signed(g, x + theta * y) - gi;
      const double den = y * y + df * df;
      const double num = part == CauchyPart::Re ? y * dg * dh : -df * dg * dh;
      acc += w[static_cast<std::size_t>(k + n - 1)] * num / den;
    }
    out[ii] = acc;
  });
  check_output(out, "cauchy_bilinear: non-finite result");
  return out;
}

std::vector<double> t_operator(const SampledGraph& f, const SampledGraph& g, double alpha,
                               double beta) {
  require(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0,
          "t_operator: alpha and beta must lie in [0,1]");
  require(f.n >= 5, "t_operator: need n >= 5");
  reject_nan(f, "t_operator: non-finite f");
  reject_nan(g, "t_operator: non-finite g");
  for (double v : f.values)
    if (v < 0.0) fail(ErrorCode::InvalidArgument, "t_operator: f must be nonnegative");

  const long n = static_cast<long>(f.n);
  const double dx = f.h();
  const std::size_t m = static_cast<std::size_t>(n - 1);
  const auto w = simpson_weights(m, dx);
  const double width = static_cast<double>(m) * dx;
  std::vector<double> out(f.n, 0.0);

  parallel_for(f.n, [&](std::size_t ii) {
    const long i = static_cast<long>(ii);
    const double x = f.x(ii), fi = f.values[ii], c = alpha * x;
    // Pair sum y [g(c + by)/(y^2 + D+^2) - g(c - by)/(y^2 + D-^2)], D = f(x) + f(x +- y).
    std::vector<double> p(m + 1, 0.0);
    for (std::size_t k = 1; k <= m; ++k) {
      const double y = static_cast<double>(k) * dx;
      const double dp = fi + on_grid(f, i + static_cast<long>(k));
      const double dm = fi + on_grid(f, i - static_cast<long>(k));
      const double gp = interpolate_signed(g, c + beta * y);
      const double gm = interpolate_signed(g, c - beta * y);
      p[k] = y * (gp / (y * y + dp * dp) - gm / (y * y + dm * dm));
    }
    // At y = 0 the pair vanishes when f(x) > 0; otherwise it has a finite limit.
    p[0] = fi > 0.0 ? 0.0 : 2.0 * p[1] - p[2];
    double acc = 0.0;
    for (std::size_t k = 0; k <= m; ++k) acc += w[k] * p[k];

    // Beyond the grid f(x +- y) = 0 and the pair only sees g; in z = by it reads
    // z [g(c + z) - g(c - z)] / (z^2 + (b f(x))^2).
    if (beta > 0.0) {
      const double z0 = beta * width;
      const double z1 = std::max(std::abs(g.x_hi - c), std::abs(c - g.x_lo));
      if (z1 > z0) {
        const double dz = g.h();
        const std::size_t mz = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((z1 - z0) / dz)));
        const double hz = (z1 - z0) / static_cast<double>(mz);
        const auto wz = simpson_weights(mz, hz);
        const double bf = beta * fi;
        for (std::size_t k = 0; k <= mz; ++k) {
          const double z = z0 + static_cast<double>(k) * hz;
          const double dg = interpolate_signed(g, c + z) - interpolate_signed(g, c - z);
          acc += wz[k] * z * dg / (z * z + bf * bf);
        }
      }
    }
    out[ii] = acc;
  });
  check_output(out, "t_operator: non-finite result");
  return out;
}

double BumpSum::operator()(double x) const {
  double s = 0.0;
  for (const auto& t : terms) {
    const double u = (x - t.center) / t.width;
    const double r = 1.0 - u * u;
    if (r > 0.0) s += t.amplitude * r * r * r;
  }
  return s;
}

std::vector<ProbeFamily> probe_family(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto bumps = [&](bool positive) {
    BumpSum b;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < k; ++j) {
      const double width = draw(0.2, 0.4);
      const double center = draw(-0.9 + width, 0.9 - width);
      double amp = positive ? draw(0.02, 0.2) : draw(-1.0, 1.0);
      b.terms.push_back({amp, center, width});
    }
    return b;
  };
  std::vector<ProbeFamily> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ProbeFamily s;
    s.f = bumps(true);
    s.g = bumps(false);
    s.h = bumps(false);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

double ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
  return num / den;
}

double c_beta(double beta) { return beta > 0.0 ? 1.0 - std::log(beta) : 1.0; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string key_theta(const char* op, double theta) { return std::string(op) + "[theta=" + fmt(theta) + "]"; }

std::string key_ab(const char* op, double a, double b) {
  return std::string(op) + "[alpha=" + fmt(a) + ",beta=" + fmt(b) + "]";
}

struct Norms {
  double inf, x, d;  // sup, C^s, Dini
};

Norms norms(const SampledGraph& g, double s) {
  const double inf = linf(g);
  return {inf, inf + holder_seminorm(g, s), inf + dini_norm(g)};
}

// |f' T g|_D / (|f'|_D |g|_D): the beta-sweep quantity.
std::string key_sweep(double a, double b) { return key_ab("sweep", a, b); }

}  // namespace

std::map<std::string, double> sample_ratios(const SampledGraph& f, const SampledGraph& g,
                                            const SampledGraph& h, const ProbeConfig& cfg) {
  const double s = cfg.s;
  const SampledGraph df = slope(f);
  const Norms nf = norms(df, s), ng = norms(g, s), nh = norms(h, s);
  std::map<std::string, double> out;

  const double mix = ng.d * nh.x + nh.d * ng.x;
  for (double th : cfg.thetas) {
    const Norms re = norms(f.with_values(cauchy_bilinear(f, g, h, th, CauchyPart::Re)), s);
    const Norms im = norms(f.with_values(cauchy_bilinear(f, g, h, th, CauchyPart::Im)), s);
    out[key_theta("C_re", th)] = ratio(re.x, (1.0 + nf.inf * nf.x) * mix);
    out[key_theta("C_im", th)] = ratio(im.x, nf.x * (1.0 + nf.inf * nf.inf) * mix);
  }

  auto t_ratios = [&](double a, double b, bool bounds, bool sweep) {
    const auto tg = t_operator(f, g, a, b);
    std::vector<double> ftg(f.n);
    for (std::size_t i = 0; i < f.n; ++i) ftg[i] = df.values[i] * tg[i];
    const Norms nt = norms(f.with_values(tg), s);
    const Norms nft = norms(f.with_values(ftg), s);
    if (bounds) {
      out[key_ab("T_inf", a, b)] =
          ratio(nt.inf, (1.0 + nf.inf * nf.inf + nf.inf * nf.d) * ng.d);
      const double lnp = nf.d > 0.0 ? std::max(0.0, std::log(1.0 / nf.d)) : 0.0;
      out[key_ab("fT_dini", a, b)] =
          ratio(nft.d, nf.d * (c_beta(b) * lnp + std::pow(nf.d, 14)) * ng.d);
      out[key_ab("fT_holder", a, b)] =
          ratio(nft.x, (c_beta(b) * std::pow(nf.inf, 1.0 / (1.0 + s)) + std::pow(nf.x, 14)) * ng.x);
    }
    if (sweep) out[key_sweep(a, b)] = ratio(nft.d, nf.d * ng.d);
  };
  for (const auto& [a, b] : cfg.alpha_beta) t_ratios(a, b, true, false);
  for (double b : cfg.beta_sweep) t_ratios(cfg.sweep_alpha, b, false, true);
  return out;
}

bool ProbeSummary::passed() const {
  for (const auto& r : reports)
    if (!r.passed()) return false;
  return sweep.passed();
}

ProbeSummary probe_bounds(const ProbeConfig& cfg) {
  require(cfg.samples >= 1, "probe_bounds: need at least one sample");
  require(cfg.coarse_n >= 5 && cfg.fine_n >= 5, "probe_bounds: grids too small");
  const auto family = probe_family(cfg.samples, cfg.seed);

  // Per-sample ratio maps on both grids; aggregated in sample order.
  std::vector<std::map<std::string, double>> coarse(cfg.samples), fine(cfg.samples);
  parallel_for(cfg.samples * 2, [&](std::size_t job) {
    const std::size_t i = job / 2;
    const std::size_t n = job % 2 ? cfg.fine_n : cfg.coarse_n;
    const auto& fam = family[i];
    const auto f = SampledGraph::sample(cfg.x_lo, cfg.x_hi, n, [&](double x) { return fam.f(x); });
    const auto g = SampledGraph::sample(cfg.x_lo, cfg.x_hi, n, [&](double x) { return fam.g(x); });
    const auto h = SampledGraph::sample(cfg.x_lo, cfg.x_hi, n, [&](double x) { return fam.h(x); });
    (job % 2 ? fine : coarse)[i] = sample_ratios(f, g, h, cfg);
  });

  ProbeSummary sum;
  sum.seed = cfg.seed;
  sum.samples = cfg.samples;
  auto collect = [&](const std::string& key) {
    OperatorProbeReport r;
    r.samples = cfg.samples;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      const double a = coarse[i].at(key), b = fine[i].at(key);
      if (!std::isfinite(a) || !std::isfinite(b)) r.all_finite = false;
      r.max_ratio_coarse = std::max(r.max_ratio_coarse, a);
      r.max_ratio = std::max(r.max_ratio, b);
    }
    r.refinement = r.max_ratio_coarse > 0.0 ? r.max_ratio / r.max_ratio_coarse
                                            : (r.max_ratio == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    return r;
  };

  for (double th : cfg.thetas) {
    for (const char* op : {"C_re", "C_im"}) {
      auto r = collect(key_theta(op, th));
      r.op = op;
      r.bound = op[2] == 'r' ? "bilinear_re_X" : "bilinear_im_X";
      r.params["theta"] = th;
      sum.reports.push_back(std::move(r));
    }
  }
  for (const auto& [a, b] : cfg.alpha_beta) {
    for (const char* bound : {"T_inf", "fT_dini", "fT_holder"}) {
      auto r = collect(key_ab(bound, a, b));
      r.op = "T_alpha_beta";
      r.bound = bound;
      r.params["alpha"] = a;
      r.params["beta"] = b;
      sum.reports.push_back(std::move(r));
    }
  }

  BetaSweep& sw = sum.sweep;
  sw.alpha = cfg.sweep_alpha;
  for (double b : cfg.beta_sweep) {
    const auto r = collect(key_sweep(cfg.sweep_alpha, b));
    sw.betas.push_back(b);
    sw.max_ratio.push_back(r.max_ratio);
    sw.c_beta.push_back(c_beta(b));
  }
  // Sort by decreasing beta so growth reads from beta = max toward 0.
  std::vector<std::size_t> idx(sw.betas.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sw.betas[a] > sw.betas[b]; });
  BetaSweep sorted;
  sorted.alpha = sw.alpha;
  for (std::size_t i : idx) {
    sorted.betas.push_back(sw.betas[i]);
    sorted.max_ratio.push_back(sw.max_ratio[i]);
    sorted.c_beta.push_back(sw.c_beta[i]);
  }
  const double base = sorted.max_ratio.empty() ? 0.0 : sorted.max_ratio.front();
  bool up = true, down = true, within = base > 0.0 && std::isfinite(base);
  for (std::size_t i = 0; i < sorted.betas.size(); ++i) {
    const double gr = base > 0.0 ? sorted.max_ratio[i] / base : 0.0;
    sorted.growth.push_back(gr);
    // C_beta relative to the reference beta
    if (gr > sorted.c_beta[i] / sorted.c_beta.front() + 1e-12) within = false;
    if (i > 0) {
      if (sorted.max_ratio[i] < sorted.max_ratio[i - 1]) up = false;
      if (sorted.max_ratio[i] > sorted.max_ratio[i - 1]) down = false;
    }
  }
  sorted.monotone = up || down;
  sorted.within_log = within;
  sw = std::move(sorted);
  return sum;
}

}  // namespace aggre
