// SPDX-License-Identifier: Apache-2.0
#include "hfhom/bloch_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "hfhom/errors.hpp"

namespace hfhom
{

namespace
{
constexpr double pi = std::numbers::pi;
const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);
}  // namespace

double TorusGrid::dk() const noexcept { return 2.0 * pi / L(); }

TorusGrid make_torus(double eps, double L_min, int P)
{
  if (!(eps > 0.0) || !(L_min > 0.0))
    throw Error(Errc::InvalidArgument, "torus needs eps > 0 and L > 0");
  if (P < 8 || (P & (P - 1)) != 0)
    throw Error(Errc::InvalidArgument, "points per cell must be a power of two >= 8");
  TorusGrid g;
  g.eps = eps;
  g.P = P;
  long n = static_cast<long>(std::ceil(L_min / eps - 1e-9));
  n += n % 2;
  g.n_cells = static_cast<int>(std::max(2L, n));
  return g;
}

std::string to_string(ProfileKind k)
{
  switch (k)
  {
    case ProfileKind::Bump: return "bump";
    case ProfileKind::PowerLaw: return "powerlaw";
    case ProfileKind::Point: return "point";
  }
  return "bump";
}

ProfileKind profile_kind_from_string(const std::string &s)
{
  if (s == "bump")
    return ProfileKind::Bump;
  if (s == "powerlaw")
    return ProfileKind::PowerLaw;
  if (s == "point")
    return ProfileKind::Point;
  throw Error(Errc::UnsupportedKind, "profile kind '" + s + "'");
}

double profile_support(const ProfileSpec &spec)
{
  switch (spec.kind)
  {
    case ProfileKind::Bump:
    case ProfileKind::PowerLaw: return spec.K;
    case ProfileKind::Point: return std::abs(spec.center) + spec.point_support * spec.width;
  }
  return spec.K;
}

double profile_width(const ProfileSpec &spec)
{
  switch (spec.kind)
  {
    case ProfileKind::Bump: return 32.0 * pi / spec.K;
    case ProfileKind::PowerLaw: return 32.0 * pi;
    case ProfileKind::Point: return 8.0 * pi / spec.width;
  }
  return 32.0 * pi;
}

double SpectralProfile::l2_norm() const { return h_norm(0.0); }

double SpectralProfile::h_norm(double qq) const
{
  double acc = 0.0;
  for (int m = -m_max; m <= m_max; ++m)
  {
    const double kk = k(m);
    acc += std::pow(1.0 + kk * kk, qq) * std::norm(amp(m));
  }
  return std::sqrt(acc * dk);
}

namespace
{

// int_K^inf (1+k^2)^{-p} dk via k = K/u on (0,1], composite Simpson.
double powerlaw_tail(double K, double p)
{
  const int n = 4000;
  auto f = [&](double u) {
    if (u <= 0.0)
      return 0.0;
    const double k = K / u;
    return std::pow(1.0 + k * k, -p) * K / (u * u);
  };
  double acc = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i)
    acc += f(static_cast<double>(i) / n) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc / (3.0 * n);
}

}  // namespace

SpectralProfile make_profile(const ProfileSpec &spec, double dk)
{
  if (!(dk > 0.0))
    throw Error(Errc::InvalidArgument, "profile grid spacing must be positive");
  SpectralProfile p;
  p.spec = spec;
  p.dk = dk;
  const double support = profile_support(spec);
  if (!(support > 0.0))
    throw Error(Errc::InvalidArgument, "profile support must be positive");
  p.m_max = static_cast<int>(std::floor(support / dk));
  p.amplitudes.assign(static_cast<size_t>(2 * p.m_max + 1), cplx{});

  double pw = 0.0;
  switch (spec.kind)
  {
    case ProfileKind::Bump:
      p.sobolev_q = spec.q;
      for (int m = -p.m_max; m <= p.m_max; ++m)
      {
        const double r = p.k(m) / spec.K;
        if (std::abs(r) < 1.0)
          p.amplitudes[static_cast<size_t>(m + p.m_max)] = std::exp(-1.0 / (1.0 - r * r));
      }
      break;
    case ProfileKind::PowerLaw:
      p.sobolev_q = spec.q;
      pw = spec.q + 0.5 + spec.delta;
      for (int m = -p.m_max; m <= p.m_max; ++m)
      {
        const double kk = p.k(m);
        p.amplitudes[static_cast<size_t>(m + p.m_max)] = std::pow(1.0 + kk * kk, -0.5 * pw);
      }
      break;
    case ProfileKind::Point:
      p.sobolev_q = spec.q;
      if (!(spec.width > 0.0))
        throw Error(Errc::InvalidArgument, "point profile width must be positive");
      for (int m = -p.m_max; m <= p.m_max; ++m)
      {
        const double z = (p.k(m) - spec.center) / spec.width;
        if (std::abs(z) <= spec.point_support)
          p.amplitudes[static_cast<size_t>(m + p.m_max)] = std::exp(-0.5 * z * z);
      }
      break;
  }

  double raw = 0.0;
  for (const auto &a : p.amplitudes)
    raw += std::norm(a);
  raw *= dk;
  if (!(raw > 0.0))
    throw Error(Errc::InvalidArgument, "profile has no mass on the frequency grid");
  const double scale = 1.0 / std::sqrt(raw);
  for (auto &a : p.amplitudes)
    a *= scale;
  if (spec.kind == ProfileKind::PowerLaw)
    p.tail_mass = 2.0 * powerlaw_tail(spec.K, pw) / raw;

  p.K = 0.0;
  for (int m = -p.m_max; m <= p.m_max; ++m)
    if (std::abs(p.amp(m)) > 0.0)
      p.K = std::max(p.K, std::abs(p.k(m)));
  p.hq_norm = p.h_norm(p.sobolev_q);
  return p;
}

double WaveField::norm() const
{
  double acc = 0.0;
  for (const auto &v : values)
    acc += std::norm(v);
  return std::sqrt(acc * grid.dx());
}

Eigen::VectorXcd SynthesisPlan::coeffs(int m) const
{
  if (m < m_min || m > m_max)
    throw Error(Errc::ZoneOverflow, "frequency index outside the plan's band samples");
  return interp_vector(*table, s, k0 + eps * m * grid.dk());
}

double SynthesisPlan::energy(int m) const
{
  if (m < m_min || m > m_max)
    throw Error(Errc::ZoneOverflow, "frequency index outside the plan's band samples");
  return interp_energy(*table, s, k0 + eps * m * grid.dk());
}

namespace
{

template <class CoeffFn>
WaveField bin_and_transform(const TorusGrid &grid, double field_eps, const std::vector<cplx> &amps, int m_max,
                            CoeffFn &&coeff, bool shifted)
{
  const long M = grid.M();
  if (2L * m_max >= grid.n_cells)
    throw Error(Errc::ZoneOverflow, "frequency support reaches the zone boundary on this torus");
  std::vector<cplx> bins(static_cast<size_t>(M), cplx{});
  const double pref = inv_sqrt_2pi * grid.dk();
  const long shift = shifted ? grid.n_cells / 2 : 0;
  for (int m = -m_max; m <= m_max; ++m)
  {
    const cplx a = amps[static_cast<size_t>(m + m_max)];
    if (a == cplx{})
      continue;
    const Eigen::VectorXcd c = coeff(m);
    const long N = (c.size() - 1) / 2;
    for (long n = -N; n <= N; ++n)
    {
      const long q = m + n * grid.n_cells + shift;
      const double parity = (q % 2 == 0) ? 1.0 : -1.0;
      const long idx = ((q % M) + M) % M;
      bins[static_cast<size_t>(idx)] += parity * pref * a * c(n + N);
    }
  }
  detail::fft_backward(bins);
  WaveField f;
  f.grid = grid;
  f.values = std::move(bins);
  f.eps = field_eps;
  return f;
}

void check_zone(const TorusGrid &grid, double K)
{
  if (!(grid.eps * K < pi))
  {
    std::ostringstream os;
    os << "eps*K = " << grid.eps * K << " >= pi";
    throw Error(Errc::ZoneOverflow, os.str());
  }
}

}  // namespace

SynthesisPlan make_plan(const PeriodicCoefficients &coeffs, std::shared_ptr<const BandEdgeData> edge,
                        const TorusGrid &grid, double k_lo, double k_hi, int N)
{
  if (!edge)
    throw Error(Errc::InvalidArgument, "plan needs edge data");
  if (k_lo > 0.0 || k_hi < 0.0)
    throw Error(Errc::InvalidArgument, "plan range must contain k = 0");
  check_zone(grid, std::max(-k_lo, k_hi));
  const int m_min = -static_cast<int>(std::ceil(-k_lo / grid.dk() - 1e-9));
  const int m_max = static_cast<int>(std::ceil(k_hi / grid.dk() - 1e-9));
  const double h = grid.eps * grid.dk();
  std::vector<double> kg;
  kg.reserve(static_cast<size_t>(m_max - m_min + 1));
  for (int m = m_min; m <= m_max; ++m)
    kg.push_back(m == 0 ? edge->k0 : edge->k0 + m * h);
  BandTableOptions o;
  o.anchor = edge->k0;
  auto table = std::make_shared<const BandTable>(band_table(coeffs, kg, N, edge->s, o));

  SynthesisPlan p;
  p.edge = std::move(edge);
  p.eps = grid.eps;
  p.s = p.edge->s;
  p.k0 = p.edge->k0;
  p.direction = p.edge->sign > 0 ? Direction::Plus : Direction::Minus;
  p.shifted = p.k0 != 0.0;
  p.grid = grid;
  p.m_min = m_min;
  p.m_max = m_max;
  p.table = std::move(table);
  return p;
}

SynthesisPlan make_plan(std::shared_ptr<const BandTable> table, std::shared_ptr<const BandEdgeData> edge,
                        const TorusGrid &grid, double K)
{
  if (!edge || !table)
    throw Error(Errc::InvalidArgument, "plan needs a table and edge data");
  check_zone(grid, K);
  SynthesisPlan p;
  p.edge = std::move(edge);
  p.eps = grid.eps;
  p.s = p.edge->s;
  p.k0 = p.edge->k0;
  p.direction = p.edge->sign > 0 ? Direction::Plus : Direction::Minus;
  p.shifted = p.k0 != 0.0;
  p.grid = grid;
  p.m_max = static_cast<int>(std::ceil(K / grid.dk() - 1e-9));
  p.m_min = -p.m_max;
  p.table = std::move(table);
  return p;
}

WaveField synthesize_amplitudes(const SynthesisPlan &plan, const std::vector<cplx> &amps, int m_max)
{
  return bin_and_transform(plan.grid, plan.eps, amps, m_max, [&](int m) { return plan.coeffs(m); },
                           plan.shifted);
}

WaveField synthesize(const SynthesisPlan &plan, const SpectralProfile &profile)
{
  if (std::abs(profile.dk - plan.grid.dk()) > 1e-12 * plan.grid.dk())
    throw Error(Errc::GridMismatch, "profile frequency grid does not match the torus");
  check_zone(plan.grid, profile.K);
  return synthesize_amplitudes(plan, profile.amplitudes, profile.m_max);
}

WaveField synthesize_band(const BandTable &table, int l, double k0, bool shifted, const TorusGrid &grid,
                          const std::vector<cplx> &amps, int m_max)
{
  const double h = grid.eps * grid.dk();
  return bin_and_transform(grid, grid.eps, amps, m_max,
                           [&](int m) { return interp_vector(table, l, k0 + m * h); }, shifted);
}

WaveField inverse_transform(const std::vector<cplx> &amps, int m_max, const TorusGrid &grid)
{
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
  return bin_and_transform(grid, 0.0, amps, m_max, [&](int) { return one; }, false);
}

WaveField inverse_transform(const SpectralProfile &profile, const TorusGrid &grid)
{
  if (std::abs(profile.dk - grid.dk()) > 1e-12 * grid.dk())
    throw Error(Errc::GridMismatch, "profile frequency grid does not match the torus");
  return inverse_transform(profile.amplitudes, profile.m_max, grid);
}

namespace
{

template <class CoeffFn>
std::vector<cplx> analyze(const WaveField &field, int m_max, CoeffFn &&coeff, bool shifted)
{
  const auto &grid = field.grid;
  const long M = grid.M();
  if (static_cast<long>(field.values.size()) != M)
    throw Error(Errc::GridMismatch, "field size does not match its grid");
  if (2L * m_max >= grid.n_cells)
    throw Error(Errc::ZoneOverflow, "analysis range reaches the zone boundary");
  std::vector<cplx> spec = field.values;
  detail::fft_forward(spec);
  const double scale = std::sqrt(2.0 * pi) / (grid.dk() * static_cast<double>(M));
  const long shift = shifted ? grid.n_cells / 2 : 0;
  std::vector<cplx> out(static_cast<size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m)
  {
    const Eigen::VectorXcd c = coeff(m);
    const long N = (c.size() - 1) / 2;
    cplx acc{};
    for (long n = -N; n <= N; ++n)
    {
      const long q = m + n * grid.n_cells + shift;
      const double parity = (q % 2 == 0) ? 1.0 : -1.0;
      acc += std::conj(c(n + N)) * parity * spec[static_cast<size_t>(((q % M) + M) % M)];
    }
    out[static_cast<size_t>(m + m_max)] = scale * acc;
  }
  return out;
}

}  // namespace

std::vector<cplx> bloch_coeff(const WaveField &field, const BandTable &table, int l, double k0, bool shifted,
                              int m_max)
{
  if (field.eps <= 0.0)
    throw Error(Errc::GridMismatch, "Bloch analysis needs an eps-commensurate field");
  const double h = field.grid.eps * field.grid.dk();
  return analyze(field, m_max, [&](int m) { return interp_vector(table, l, k0 + m * h); }, shifted);
}

std::vector<cplx> bloch_coeff(const WaveField &field, const SynthesisPlan &plan, int m_max)
{
  if (!field.grid.same_as(plan.grid))
    throw Error(Errc::GridMismatch, "field and plan live on different tori");
  return analyze(field, m_max, [&](int m) { return plan.coeffs(m); }, plan.shifted);
}

double amplitude_norm(const std::vector<cplx> &amps, double dk)
{
  double acc = 0.0;
  for (const auto &a : amps)
    acc += std::norm(a);
  return std::sqrt(acc * dk);
}

}  // namespace hfhom
