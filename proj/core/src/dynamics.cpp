// SPDX-License-Identifier: Apache-2.0
#include "hfhom/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hfhom/errors.hpp"

namespace hfhom
{

namespace
{

constexpr double pi = std::numbers::pi;

// sin(t w) / w, regularized at w t -> 0.
double sin_over(double t, double w)
{
  const double x = t * w;
  if (std::abs(x) < 1e-4)
    return t * (1.0 - x * x / 6.0);
  return std::sin(x) / w;
}

void check_spec(const EvolutionSpec &spec)
{
  if (!spec.plan)
    throw Error(Errc::InvalidArgument, "evolution needs a synthesis plan");
  if (spec.equation == Equation::Wave && !spec.profile_g)
    throw Error(Errc::InvalidArgument, "Wave evolution needs an initial velocity profile");
  if (spec.equation == Equation::Schrodinger && spec.profile_g)
    throw Error(Errc::InvalidArgument, "Schrodinger evolution takes a single profile");
  const double dk = spec.plan->grid.dk();
  auto same = [dk](const SpectralProfile &p) { return std::abs(p.dk - dk) <= 1e-12 * dk; };
  if (!same(spec.profile_f) || (spec.profile_g && !same(*spec.profile_g)))
    throw Error(Errc::GridMismatch, "profile frequency grid does not match the torus");
}

int support_of(const EvolutionSpec &spec)
{
  int m = spec.profile_f.m_max;
  if (spec.profile_g)
    m = std::max(m, spec.profile_g->m_max);
  return m;
}

}  // namespace

std::string to_string(Equation e) { return e == Equation::Wave ? "wave" : "schrodinger"; }

Equation equation_from_string(const std::string &s)
{
  if (s == "schrodinger" || s == "Schrodinger")
    return Equation::Schrodinger;
  if (s == "wave" || s == "Wave")
    return Equation::Wave;
  throw Error(Errc::InvalidArgument, "unknown equation '" + s + "'");
}

EvolvedAmplitudes exact_amplitudes(const EvolutionSpec &spec, bool strip_phase)
{
  check_spec(spec);
  const auto &plan = *spec.plan;
  const auto &edge = *plan.edge;
  const int m_max = support_of(spec);

  const double eps = plan.eps, t = spec.t, sigma = edge.sigma;
  EvolvedAmplitudes out;
  out.m_max = m_max;
  const size_t n = static_cast<size_t>(2 * m_max + 1);
  out.value.assign(n, cplx{});
  const cplx common = strip_phase ? cplx(1.0) : std::polar(1.0, -t * sigma / (eps * eps));

  if (spec.equation == Equation::Schrodinger)
  {
    for (int m = -m_max; m <= m_max; ++m)
    {
      const cplx f = spec.profile_f.amp(m);
      if (f == cplx{})
        continue;
      const double d = plan.energy(m) - sigma;
      out.value[static_cast<size_t>(m + m_max)] = f * common * std::polar(1.0, -t * d / (eps * eps));
    }
    return out;
  }

  out.rate.assign(n, cplx{});
  out.omega_sq.assign(n, 0.0);
  const auto &g = *spec.profile_g;
  for (int m = -m_max; m <= m_max; ++m)
  {
    const cplx f = spec.profile_f.amp(m), gv = g.amp(m);
    if (f == cplx{} && gv == cplx{})
      continue;
    double lam = edge.sign * (plan.energy(m) - sigma);
    if (lam < -1e-12 * (1.0 + std::abs(sigma)))
    {
      std::ostringstream os;
      os << "sign*(E - sigma) = " << lam << " at k = " << plan.k0 + eps * m * plan.grid.dk();
      throw Error(Errc::NegativeSpectralShift, os.str());
    }
    lam = std::max(lam, 0.0);
    const double w = std::sqrt(lam) / eps;
    const double c = std::cos(t * w), so = sin_over(t, w);
    const auto i = static_cast<size_t>(m + m_max);
    out.value[i] = c * f + so * gv;
    out.rate[i] = -w * w * so * f + c * gv;
    out.omega_sq[i] = w * w;
  }
  return out;
}

EvolvedAmplitudes effective_amplitudes(const EvolutionSpec &spec, const BandEdgeData &edge)
{
  check_spec(spec);
  const int m_max = support_of(spec);
  const double t = spec.t, dk = spec.plan->grid.dk();
  EvolvedAmplitudes out;
  out.m_max = m_max;
  const size_t n = static_cast<size_t>(2 * m_max + 1);
  out.value.assign(n, cplx{});

  if (spec.equation == Equation::Schrodinger)
  {
    for (int m = -m_max; m <= m_max; ++m)
    {
      const double k = m * dk;
      out.value[static_cast<size_t>(m + m_max)] =
          spec.profile_f.amp(m) * std::polar(1.0, -t * edge.sign * edge.b * k * k);
    }
    return out;
  }

  out.rate.assign(n, cplx{});
  out.omega_sq.assign(n, 0.0);
  const double sb = std::sqrt(edge.b);
  for (int m = -m_max; m <= m_max; ++m)
  {
    const double w = sb * std::abs(m * dk);
    const cplx f = spec.profile_f.amp(m), gv = spec.profile_g->amp(m);
    const double c = std::cos(t * w), so = sin_over(t, w);
    const auto i = static_cast<size_t>(m + m_max);
    out.value[i] = c * f + so * gv;
    out.rate[i] = -w * w * so * f + c * gv;
    out.omega_sq[i] = w * w;
  }
  return out;
}

WaveField evolve_exact(const EvolutionSpec &spec)
{
  const auto a = exact_amplitudes(spec);
  return synthesize_amplitudes(*spec.plan, a.value, a.m_max);
}

WaveField evolve_exact_rate(const EvolutionSpec &spec)
{
  if (spec.equation != Equation::Wave)
    throw Error(Errc::InvalidArgument, "time derivative field is provided for Wave only");
  const auto a = exact_amplitudes(spec);
  return synthesize_amplitudes(*spec.plan, a.rate, a.m_max);
}

WaveField evolve_effective(const EvolutionSpec &spec, const BandEdgeData &edge)
{
  const auto a = effective_amplitudes(spec, edge);
  return inverse_transform(a.value, a.m_max, spec.plan->grid);
}

WaveField modulated_approximant(const WaveField &u0, const BandEdgeData &edge, double eps, double t,
                                Equation equation)
{
  const auto &grid = u0.grid;
  if (std::abs(grid.eps - eps) > 1e-15 * eps)
    throw Error(Errc::GridMismatch, "approximant eps differs from the torus cell size");
  const int P = grid.P;
  std::vector<cplx> cell(static_cast<size_t>(P));
  for (int r = 0; r < P; ++r)
    cell[static_cast<size_t>(r)] = eval_fourier(edge.phi_k0, static_cast<double>(r) / P);

  const bool shifted = edge.k0 != 0.0;
  std::vector<cplx> mod(static_cast<size_t>(2 * P));
  // e^{i pi x_j / eps} with x_j / eps = -n_cells/2 + j/P.
  const double start_sign = ((grid.n_cells / 2) % 2 == 0) ? 1.0 : -1.0;
  for (int r = 0; r < 2 * P; ++r)
    mod[static_cast<size_t>(r)] = start_sign * std::polar(1.0, pi * r / P);
  const cplx phase = equation == Equation::Schrodinger ? std::polar(1.0, -t * edge.sigma / (eps * eps)) : cplx(1.0);

  WaveField out;
  out.grid = grid;
  out.eps = eps;
  out.values.resize(u0.values.size());
  for (size_t j = 0; j < u0.values.size(); ++j)
  {
    cplx v = phase * cell[j % static_cast<size_t>(P)] * u0.values[j];
    if (shifted)
      v *= mod[j % static_cast<size_t>(2 * P)];
    out.values[j] = v;
  }
  return out;
}

double error_norm(const WaveField &exact, const WaveField &approx)
{
  if (!exact.grid.same_as(approx.grid) || exact.values.size() != approx.values.size())
    throw Error(Errc::GridMismatch, "fields live on different grids");
  double acc = 0.0;
  for (size_t j = 0; j < exact.values.size(); ++j)
    acc += std::norm(exact.values[j] - approx.values[j]);
  return std::sqrt(acc * exact.grid.dx());
}

double spectral_error(const EvolutionSpec &spec, const BandEdgeData &edge)
{
  const auto ex = exact_amplitudes(spec, true);
  const auto ef = effective_amplitudes(spec, edge);
  const auto &plan = *spec.plan;
  const Eigen::VectorXcd &c0 = edge.phi_k0;
  const long N0 = (c0.size() - 1) / 2;
  double acc = 0.0;
  for (int m = -ex.m_max; m <= ex.m_max; ++m)
  {
    const auto i = static_cast<size_t>(m + ex.m_max);
    const cplx ae = ex.value[i], ah = ef.value[i];
    if (ae == cplx{} && ah == cplx{})
      continue;
    const Eigen::VectorXcd c = plan.coeffs(m);
    const long N = (c.size() - 1) / 2;
    const long R = std::max(N, N0);
    for (long n = -R; n <= R; ++n)
    {
      const cplx x = std::abs(n) <= N ? c(n + N) * ae : cplx{};
      const cplx y = std::abs(n) <= N0 ? c0(n + N0) * ah : cplx{};
      acc += std::norm(x - y);
    }
  }
  return std::sqrt(acc * plan.grid.dk());
}

double wave_energy_exact(const EvolutionSpec &spec)
{
  if (spec.equation != Equation::Wave)
    throw Error(Errc::InvalidArgument, "energy is defined for Wave");
  const auto a = exact_amplitudes(spec, true);
  double acc = 0.0;
  for (size_t i = 0; i < a.value.size(); ++i)
    acc += std::norm(a.rate[i]) + a.omega_sq[i] * std::norm(a.value[i]);
  return acc * spec.plan->grid.dk();
}

double wave_energy_effective(const EvolutionSpec &spec, const BandEdgeData &edge)
{
  if (spec.equation != Equation::Wave)
    throw Error(Errc::InvalidArgument, "energy is defined for Wave");
  const auto a = effective_amplitudes(spec, edge);
  double acc = 0.0;
  for (size_t i = 0; i < a.value.size(); ++i)
    acc += std::norm(a.rate[i]) + a.omega_sq[i] * std::norm(a.value[i]);
  return acc * spec.plan->grid.dk();
}

}  // namespace hfhom
