// SPDX-License-Identifier: Apache-2.0
#include "hfhom/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "hfhom/errors.hpp"

namespace hfhom
{

namespace
{

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double tail_norm(const Eigen::VectorXcd &c, long from)
{
  const long N = (c.size() - 1) / 2;
  double acc = 0.0;
  for (long n = from; n <= N; ++n)
    acc += std::norm(c(n + N)) + std::norm(c(N - n));
  return std::sqrt(acc);
}

// Nonzero amplitude range [lo, hi] in frequency index; (0, 0) if empty.
std::pair<int, int> support_range(const SpectralProfile &p)
{
  int lo = 0, hi = 0;
  bool any = false;
  for (int m = -p.m_max; m <= p.m_max; ++m)
  {
    if (p.amp(m) == cplx{})
      continue;
    lo = any ? std::min(lo, m) : m;
    hi = any ? std::max(hi, m) : m;
    any = true;
  }
  return {lo, hi};
}

void check_decreasing(const std::vector<double> &v, const char *what)
{
  if (v.empty())
    throw Error(Errc::InvalidArgument, std::string(what) + " list is empty");
  for (size_t i = 0; i < v.size(); ++i)
  {
    if (!(v[i] > 0.0))
      throw Error(Errc::InvalidArgument, std::string(what) + " values must be positive");
    if (i > 0 && !(v[i] < v[i - 1]))
      throw Error(Errc::InvalidArgument, std::string(what) + " values must be strictly decreasing");
  }
}

std::string with_eps(const Error &e, double eps, double t)
{
  std::string msg = e.what();
  if (const auto pos = msg.find(": "); pos != std::string::npos)
    msg = msg.substr(pos + 2);
  std::ostringstream os;
  os << msg << " (eps = " << eps << ", t = " << t << ")";
  return os.str();
}

BandTable table_from_edge(const BandEdgeData &edge)
{
  BandTable tab;
  tab.kgrid = edge.kgrid;
  const auto n = static_cast<Eigen::Index>(edge.kgrid.size());
  tab.energies = Eigen::MatrixXd::Zero(n, edge.s);
  for (Eigen::Index i = 0; i < n; ++i)
    tab.energies(i, edge.s - 1) = edge.energy[static_cast<size_t>(i)];
  tab.eigvecs.resize(static_cast<size_t>(edge.s));
  tab.eigvecs[static_cast<size_t>(edge.s - 1)] = edge.phi;
  tab.N = static_cast<int>((edge.phi_k0.size() - 1) / 2);
  tab.anchor = edge.k0;
  tab.anchor_index = edge.k0_index;
  return tab;
}

}  // namespace

int choose_points_per_cell(const BandEdgeData &edge, double tol, int P_max)
{
  for (int P = 8; P <= P_max; P *= 2)
  {
    double worst = tail_norm(edge.phi_k0, P / 2);
    for (const auto &c : edge.phi)
      worst = std::max(worst, tail_norm(c, P / 2));
    if (worst <= tol)
      return P;
  }
  return P_max;
}

double max_drift_speed(const BandEdgeData &edge, Equation eq, double eps, double k_lo, double k_hi)
{
  const auto &kg = edge.kgrid;
  const double lo = edge.k0 + eps * k_lo, hi = edge.k0 + eps * k_hi;
  const double sb = std::sqrt(edge.b);
  double v = 0.0;
  for (size_t i = 0; i + 1 < kg.size(); ++i)
  {
    if (kg[i + 1] < lo || kg[i] > hi)
      continue;
    const double h = kg[i + 1] - kg[i];
    const double d0 = kg[i] - edge.k0, d1 = kg[i + 1] - edge.k0;
    double d;
    if (eq == Equation::Schrodinger)
      d = std::abs(edge.energy[i + 1] - edge.energy[i] - edge.sign * edge.b * (d1 * d1 - d0 * d0)) / (h * eps);
    else
      d = std::abs(std::sqrt(std::abs(edge.energy[i + 1] - edge.sigma)) -
                   std::sqrt(std::abs(edge.energy[i] - edge.sigma)) - sb * (std::abs(d1) - std::abs(d0))) /
          h;
    v = std::max(v, d);
  }
  return v;
}

TorusGrid size_torus(const EdgeContext &ctx, const ExperimentSpec &spec, double eps, double t_max)
{
  const int P = ctx.P > 0 ? ctx.P : choose_points_per_cell(*ctx.edge);
  double W = profile_width(spec.f);
  double K = profile_support(spec.f);
  if (spec.g)
  {
    W = std::max(W, profile_width(*spec.g));
    K = std::max(K, profile_support(*spec.g));
  }
  const double v = max_drift_speed(*ctx.edge, spec.equation, eps, -K, K);
  return make_torus(eps, 2.0 * (W + v * std::abs(t_max)), P);
}

bool admissible(const BandEdgeData &edge, Equation eq, double eps, double t)
{
  if (t == 0.0)
    return true;
  if (eq == Equation::Schrodinger)
    return eps / std::sqrt(std::abs(t)) <= edge.frak_e;
  return eps / std::abs(t) <= edge.frak_e_tilde;
}

PointFields evolve_point(const EdgeContext &ctx, const ExperimentSpec &spec, double eps, double t)
{
  if (!ctx.edge)
    throw Error(Errc::InvalidArgument, "experiment needs edge data");
  if (spec.equation == Equation::Wave && !spec.g)
    throw Error(Errc::InvalidArgument, "Wave experiment needs a velocity profile");
  const auto &edge = *ctx.edge;
  try
  {
    const TorusGrid grid = size_torus(ctx, spec, eps, t);
    SpectralProfile pf = make_profile(spec.f, grid.dk());
    std::optional<SpectralProfile> pg;
    if (spec.g && spec.equation == Equation::Wave)
      pg = make_profile(*spec.g, grid.dk());
    double hq = pf.hq_norm;
    if (spec.zero_f)
    {
      if (!pg)
        throw Error(Errc::InvalidArgument, "zero f needs a velocity profile");
      std::fill(pf.amplitudes.begin(), pf.amplitudes.end(), cplx{});
      hq = pg->hq_norm;
    }
    if (spec.zero_g && pg)
      std::fill(pg->amplitudes.begin(), pg->amplitudes.end(), cplx{});
    if (spec.zero_f && spec.zero_g)
      throw Error(Errc::InvalidArgument, "both Wave profiles are zero");

    auto [lo, hi] = support_range(pf);
    if (pg)
    {
      const auto [glo, ghi] = support_range(*pg);
      lo = std::min(lo, glo);
      hi = std::max(hi, ghi);
    }
    const double dk = grid.dk();
    auto plan = std::make_shared<const SynthesisPlan>(
        make_plan(ctx.coeffs, ctx.edge, grid, std::min(0, lo) * dk, std::max(0, hi) * dk, ctx.N_synth));

    EvolutionSpec es{spec.equation, plan, t, pf, pg};
    PointFields out;
    out.exact = evolve_exact(es);
    out.approx = modulated_approximant(evolve_effective(es, edge), edge, eps, t, spec.equation);
    const WaveField &exact = out.exact;
    const WaveField &approx = out.approx;

    PointResult &r = out.result;
    r.eps = eps;
    r.t = t;
    r.error = error_norm(exact, approx);
    r.spectral_error = spectral_error(es, edge);
    r.hq_norm = hq;
    r.exact_norm = exact.norm();
    r.n_cells = grid.n_cells;
    r.P = grid.P;
    r.admissible = admissible(edge, spec.equation, eps, t);
    return out;
  }
  catch (const Error &e)
  {
    throw Error(e.code(), with_eps(e, eps, t));
  }
}

PointResult run_point(const EdgeContext &ctx, const ExperimentSpec &spec, double eps, double t)
{
  return evolve_point(ctx, spec, eps, t).result;
}

LineFit ols_loglog(const std::vector<double> &x, const std::vector<double> &y)
{
  if (x.size() != y.size())
    throw Error(Errc::InvalidArgument, "fit needs matching point lists");
  LineFit f;
  f.n = static_cast<int>(x.size());
  if (f.n < 2)
    throw Error(Errc::InvalidArgument, "fit needs at least two points");
  double sx = 0, sy = 0;
  std::vector<double> lx(x.size()), ly(y.size());
  for (size_t i = 0; i < x.size(); ++i)
  {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / f.n, my = sy / f.n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i)
  {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0))
    throw Error(Errc::InvalidArgument, "fit abscissae coincide");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rr = 0;
  for (size_t i = 0; i < x.size(); ++i)
  {
    const double e = ly[i] - (f.intercept + f.slope * lx[i]);
    rr += e * e;
  }
  f.residual = std::sqrt(rr / f.n);
  return f;
}

SweepResult epsilon_sweep(const EdgeContext &ctx, const ExperimentSpec &spec, double t,
                          const std::vector<double> &eps_values, double theory_slope)
{
  check_decreasing(eps_values, "eps");
  SweepResult s;
  s.equation = spec.equation;
  s.t = t;
  s.theory_slope = theory_slope;
  s.eps_values = eps_values;
  std::vector<double> fx, fy;
  double worst = 0.0;
  for (double eps : eps_values)
  {
    const PointResult r = run_point(ctx, spec, eps, t);
    s.points.push_back(r);
    s.errors.push_back(r.error);
    s.spectral_errors.push_back(r.spectral_error);
    s.hq_norms.push_back(r.hq_norm);
    s.admissibility.push_back(r.admissible);
    worst = std::max(worst, r.error);
    if (r.admissible && r.error > 0.0)
    {
      fx.push_back(eps);
      fy.push_back(r.error);
    }
  }
  s.slope_partial.assign(eps_values.size(), nan);
  for (size_t i = 1; i < eps_values.size(); ++i)
    if (s.errors[i] > 0.0 && s.errors[i - 1] > 0.0)
      s.slope_partial[i] = std::log(s.errors[i] / s.errors[i - 1]) / std::log(eps_values[i] / eps_values[i - 1]);
  if (worst > null_error_floor && fx.size() >= 2)
  {
    const LineFit f = ols_loglog(fx, fy);
    s.fitted = true;
    s.fitted_slope = f.slope;
    s.fit_residual = f.residual;
  }
  return s;
}

TimeSweepResult time_sweep(const EdgeContext &ctx, const ExperimentSpec &spec, double eps,
                           const std::vector<double> &t_values)
{
  if (t_values.empty())
    throw Error(Errc::InvalidArgument, "t list is empty");
  for (size_t i = 0; i < t_values.size(); ++i)
  {
    if (!(t_values[i] > 0.0))
      throw Error(Errc::InvalidArgument, "t values must be positive");
    if (i > 0 && !(t_values[i] > t_values[i - 1]))
      throw Error(Errc::InvalidArgument, "t values must be strictly increasing");
  }
  TimeSweepResult s;
  s.equation = spec.equation;
  s.eps = eps;
  s.t_values = t_values;
  std::vector<double> fx, fy;
  double worst = 0.0;
  for (double t : t_values)
  {
    const PointResult r = run_point(ctx, spec, eps, t);
    s.points.push_back(r);
    s.errors.push_back(r.error);
    s.admissibility.push_back(r.admissible);
    worst = std::max(worst, r.error);
    if (r.admissible)
    {
      s.sup_ratio = std::max(s.sup_ratio, r.error / ((1.0 + std::sqrt(t)) * eps));
      if (r.error > 0.0)
      {
        fx.push_back(t);
        fy.push_back(r.error);
      }
    }
  }
  if (worst > null_error_floor && fx.size() >= 2)
  {
    const LineFit f = ols_loglog(fx, fy);
    s.fitted = true;
    s.exponent = f.slope;
    s.fit_residual = f.residual;
  }
  return s;
}

std::string to_string(SymbolCase c)
{
  switch (c)
  {
    case SymbolCase::SchrodingerSin: return "schrodinger_sin";
    case SymbolCase::WaveSin3: return "wave_sin3";
    case SymbolCase::WaveSin3InvK: return "wave_sin3_invk";
  }
  return "schrodinger_sin";
}

SymbolCase symbol_case_from_string(const std::string &s)
{
  if (s == "1" || s == "schrodinger_sin")
    return SymbolCase::SchrodingerSin;
  if (s == "2" || s == "wave_sin3")
    return SymbolCase::WaveSin3;
  if (s == "3" || s == "wave_sin3_invk")
    return SymbolCase::WaveSin3InvK;
  throw Error(Errc::InvalidArgument, "unknown symbol case '" + s + "'");
}

SymbolCheck lemma2_check(SymbolCase kase, double q, double eps, double t, const BandEdgeData &edge, int n_grid)
{
  if (!(eps > 0.0) || t == 0.0 || n_grid < 2)
    throw Error(Errc::InadmissibleParameters, "need eps > 0, t != 0 and a grid");
  const double at = std::abs(t);
  const double g0 = std::abs(edge.gamma_at_k0), gt0 = std::abs(edge.gamma_tilde_at_k0);
  if (kase == SymbolCase::SchrodingerSin)
  {
    if (q < 0.0)
      throw Error(Errc::InadmissibleParameters, "exponent must be nonnegative");
    if (!(eps / std::sqrt(at) <= edge.frak_e))
      throw Error(Errc::InadmissibleParameters, "eps |t|^{-1/2} exceeds the admissibility threshold");
  }
  else
  {
    if (kase == SymbolCase::WaveSin3 ? q < 0.0 : q < -1.0)
      throw Error(Errc::InadmissibleParameters, "exponent outside the admissible range");
    if (!(eps / at <= edge.frak_e_tilde))
      throw Error(Errc::InadmissibleParameters, "eps |t|^{-1} exceeds the admissibility threshold");
  }

  SymbolCheck c;
  c.kase = kase;
  c.q_or_r = q;
  c.eps = eps;
  c.t = t;
  const double kappa = edge.kappa;
  double sup = 0.0;
  for (int i = 0; i < n_grid; ++i)
  {
    const double d = -kappa + 2.0 * kappa * i / (n_grid - 1);
    const double ad = std::abs(d);
    const double weight = std::pow(eps, q) * std::pow(d * d + eps * eps, -0.5 * q);
    double v;
    if (kase == SymbolCase::SchrodingerSin)
      v = weight * std::abs(std::sin(0.5 * t / (eps * eps) * d * d * d * d * gamma_at(edge, edge.k0 + d)));
    else
    {
      v = weight * std::abs(std::sin(0.5 * t / eps * ad * ad * ad * gamma_tilde_at(edge, edge.k0 + d)));
      if (kase == SymbolCase::WaveSin3InvK)
        v = ad > 0.0 ? v / ad : 0.0;
    }
    sup = std::max(sup, v);
  }
  c.grid_sup = sup;

  switch (kase)
  {
    case SymbolCase::SchrodingerSin:
      c.large_exponent = q > 4.0;
      if (!c.large_exponent)
      {
        c.formula_value = std::pow(eps, q / 2) * std::pow(at, q / 4) /
                          std::pow(1.0 / std::sqrt(g0) + eps * std::sqrt(at), q / 2);
        c.window_lo = 1.0 / 3.0;
        c.window_hi = 1.5 * pi;
      }
      else
      {
        c.formula_value = g0 * eps * eps * at;
        const double C = std::pow(q, -q / 2) * std::pow(q - 4.0, q / 2 - 2.0);
        c.window_lo = 8.0 / pi * C;
        c.window_hi = 12.0 * C;
      }
      break;
    case SymbolCase::WaveSin3:
      c.large_exponent = q > 3.0;
      c.formula_value = c.large_exponent
                            ? gt0 * eps * eps * at
                            : std::pow(eps, 2 * q / 3) * std::pow(at, q / 3) /
                                  std::pow(std::pow(gt0, -2.0 / 3) + std::pow(eps, 4.0 / 3) * std::pow(at, 2.0 / 3),
                                           q / 2);
      c.window_lo = 0.1;
      c.window_hi = 10.0;
      break;
    case SymbolCase::WaveSin3InvK:
      c.large_exponent = q > 2.0;
      c.formula_value =
          c.large_exponent
              ? gt0 * eps * at
              : std::pow(eps, (2 * q - 1) / 3) * std::pow(at, (q + 1) / 3) /
                    (std::pow(gt0, -1.0 / 3) *
                     std::pow(std::pow(gt0, -2.0 / 3) + std::pow(eps, 4.0 / 3) * std::pow(at, 2.0 / 3), q / 2));
      c.window_lo = 0.1;
      c.window_hi = 10.0;
      break;
  }
  c.ratio = c.grid_sup / c.formula_value;
  return c;
}

std::string to_string(Lemma1Variant v) { return v == Lemma1Variant::Plain ? "plain" : "inverse_k"; }

Lemma1Variant lemma1_variant_from_string(const std::string &s)
{
  if (s == "plain")
    return Lemma1Variant::Plain;
  if (s == "inverse_k")
    return Lemma1Variant::InverseK;
  throw Error(Errc::InvalidArgument, "unknown lemma1 variant '" + s + "'");
}

Lemma1Result lemma1_check(const BandEdgeData &edge, double q, double eps, Lemma1Variant variant, int trials,
                          std::uint64_t seed)
{
  if (variant == Lemma1Variant::Plain ? q < 0.0 : q < -1.0)
    throw Error(Errc::InadmissibleParameters, "exponent outside the admissible range");
  if (trials < 10)
    throw Error(Errc::InvalidArgument, "need at least 10 trials");
  if (!(eps > 0.0))
    throw Error(Errc::InvalidArgument, "eps must be positive");
  if (edge.kgrid.size() < 2 || edge.phi.size() != edge.kgrid.size())
    throw Error(Errc::InvalidArgument, "edge data lacks window eigenvectors");

  const double h = edge.kgrid[1] - edge.kgrid[0];
  const int n_cells = static_cast<int>(std::lround(2.0 * pi / h));
  if (n_cells % 2 != 0 || std::abs(n_cells * h - 2.0 * pi) > 1e-9)
    throw Error(Errc::GridMismatch, "edge window spacing must divide 2 pi into an even count");

  TorusGrid grid;
  grid.eps = 1.0;
  grid.n_cells = n_cells;
  grid.P = choose_points_per_cell(edge);
  const BandTable tab = table_from_edge(edge);
  const int m_max = static_cast<int>(std::floor(edge.kappa / h + 1e-9));
  const bool shifted = edge.k0 != 0.0;

  std::vector<double> mult(static_cast<size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m)
  {
    const double d = m * h;
    double w = std::pow(eps, q) * std::pow(d * d + eps * eps, -0.5 * q);
    if (variant == Lemma1Variant::InverseK)
      w = m == 0 ? 0.0 : w / std::abs(d);
    mult[static_cast<size_t>(m + m_max)] = w;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Lemma1Result res;
  res.variant = variant;
  res.q_or_r = q;
  res.eps = eps;
  res.trials = trials;
  std::vector<cplx> v(mult.size()), w(mult.size());
  for (int trial = 0; trial < trials; ++trial)
  {
    double vn = 0.0;
    for (size_t i = 0; i < v.size(); ++i)
    {
      const double re = normal(rng);
      const double im = normal(rng);
      v[i] = cplx(re, im);
      vn += std::norm(v[i]);
      w[i] = mult[i] * v[i];
    }
    vn = std::sqrt(vn * grid.dk());
    const WaveField exact = synthesize_band(tab, edge.s, edge.k0, shifted, grid, w, m_max);
    const WaveField approx = modulated_approximant(inverse_transform(w, m_max, grid), edge, 1.0, 0.0, Equation::Wave);
    res.max_ratio = std::max(res.max_ratio, error_norm(exact, approx) / vn);
  }

  double C;
  if (variant == Lemma1Variant::Plain)
  {
    res.normalized = res.max_ratio / std::pow(eps, std::min(1.0, q));
    C = q <= 1.0 ? std::pow(edge.kappa, 1.0 - q) : 1.0;
  }
  else
  {
    res.normalized = res.max_ratio / std::pow(eps, std::min(0.0, q));
    C = q >= 0.0 ? 1.0 : std::pow(edge.kappa * edge.kappa + 1.0, -0.5 * q);
  }
  res.bound = edge.theta_mult_norm * C;
  return res;
}

double SharpnessResult::growth() const
{
  if (points.size() < 2 || !(points.front().ratio > 0.0))
    return nan;
  return points.back().ratio / points.front().ratio;
}

double SharpnessResult::spread() const
{
  if (points.empty())
    return nan;
  double lo = points.front().ratio, hi = lo;
  for (const auto &p : points)
  {
    lo = std::min(lo, p.ratio);
    hi = std::max(hi, p.ratio);
  }
  return lo > 0.0 ? hi / lo : nan;
}

double sharpness_center(const BandEdgeData &edge, double eps, double t)
{
  const double g0 = std::abs(edge.gamma_at_k0);
  if (!(g0 > 0.0))
    throw Error(Errc::DegenerateEdge, "sharpness probe needs gamma(k0) != 0");
  return std::pow(pi, 0.25) * std::pow(g0, -0.25) * std::sqrt(eps) * std::pow(std::abs(t), -0.25);
}

SharpnessResult sharpness_probe(const EdgeContext &ctx, double q_prime, double t,
                                const std::vector<double> &eps_values, double rel_width)
{
  check_decreasing(eps_values, "eps");
  if (!ctx.edge)
    throw Error(Errc::InvalidArgument, "probe needs edge data");
  if (q_prime < 0.0 || q_prime > 2.0)
    throw Error(Errc::InadmissibleParameters, "probe exponent must lie in [0, 2]");
  if (!(rel_width > 0.0))
    throw Error(Errc::InvalidArgument, "relative width must be positive");
  const auto &edge = *ctx.edge;
  SharpnessResult out;
  out.q_prime = q_prime;
  out.t = t;
  for (double eps : eps_values)
  {
    if (!admissible(edge, Equation::Schrodinger, eps, t))
    {
      std::ostringstream os;
      os << "eps |t|^{-1/2} exceeds the threshold at eps = " << eps;
      throw Error(Errc::InadmissibleParameters, os.str());
    }
    const double xi = sharpness_center(edge, eps, t) / eps;
    ExperimentSpec spec;
    spec.equation = Equation::Schrodinger;
    spec.f.kind = ProfileKind::Point;
    spec.f.center = xi;
    spec.f.width = rel_width * xi;
    spec.f.point_support = 5.0;
    spec.f.q = q_prime;
    const PointResult r = run_point(ctx, spec, eps, t);

    SharpnessPoint p;
    p.eps = eps;
    p.center = xi;
    p.error = r.error;
    p.hq_norm = r.hq_norm;
    p.ratio = r.error / (eps * r.hq_norm);
    out.points.push_back(p);
  }
  return out;
}

}  // namespace hfhom
