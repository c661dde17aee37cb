// SPDX-License-Identifier: Apache-2.0
// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hfhom/analysis.hpp"
#include "hfhom/errors.hpp"

using namespace hfhom;

namespace
{

constexpr double pi = std::numbers::pi;

// Edge tables in the acceptance runs use N = 32; see the README.
constexpr int edge_N = 32;

std::shared_ptr<const BandEdgeData> make_edge(const PeriodicCoefficients &c, Condition cond, int N = edge_N,
                                              bool allow_degenerate = false)
{
  const BandTable tab = edge_table(c, edge_k0(cond), N, 2);
  EdgeOptions o;
  o.allow_degenerate = allow_degenerate;
  for (const auto &r : classify(tab, 1))
    if (r.condition == cond)
      return std::make_shared<const BandEdgeData>(extract_edge(tab, r, o));
  throw Error(Errc::ValidationError, "band 1 has no " + to_string(cond) + " edge for " + c.name);
}

struct Outcome
{
  bool pass = false;
  std::string detail;
};

struct Criterion
{
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char *f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<double> eps4 = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};

Outcome free_oracle()
{
  const auto c = builtin("free");
  const BandTable tab = band_table(c, uniform_grid(-pi, pi, 65), 32, 5);
  double worst = 0.0;
  for (int l = 1; l <= 5; ++l)
    for (size_t i = 0; i < tab.size(); ++i)
      worst = std::max(worst, std::abs(tab.energy(l, i) - free_band(l, tab.kgrid[i])));
  return {worst <= 1e-10, fmt("max |E - E0| = %.3g", worst)};
}

Outcome band_properties()
{
  std::ostringstream os;
  bool ok = true;
  const auto grid = uniform_grid(-pi, pi, 129);
  const size_t mid = 64;  // k = 0
  for (const auto &name : builtin_names())
  {
    const auto c = builtin(name);
    const BandTable tab = band_table(c, grid, 32, 6);
    double even = 0.0;
    int mono_bad = 0;
    int cross_bad = 0;
    double est_bad = 0.0;
    for (int l = 1; l <= 5; ++l)
    {
      for (size_t i = 0; i < tab.size(); ++i)
        even = std::max(even, std::abs(tab.energy(l, i) - tab.energy(l, tab.size() - 1 - i)));
      const int dir = (l % 2 == 1) ? 1 : -1;
      int violations = 0;
      for (size_t i = mid; i + 1 < tab.size(); ++i)
      {
        const double d = dir * (tab.energy(l, i + 1) - tab.energy(l, i));
        if (d <= 0.0)
        {
          ++violations;
          if (-d > 1e-8 * (1.0 + std::abs(tab.energy(l, i))))
            violations += 2;
        }
      }
      if (violations > 1)
        ++mono_bad;

      for (size_t i = 0; i < tab.size(); ++i)
      {
        const double k = tab.kgrid[i];
        const double E = tab.energy(l, i);
        if (tab.energy(l + 1, i) - E <= 1e-7 * (1.0 + E))
        {
          const double expect = (l % 2 == 1) ? pi : 0.0;
          if (std::abs(std::abs(k) - expect) > 1e-12)
            ++cross_bad;
        }
        // Unfolded representatives of k inside zone l.
        const double lo = c.alpha0 * c.beta0 * c.beta0 / (c.beta1 * c.beta1);
        const double hi = c.alpha1 * c.beta1 * c.beta1 / (c.beta0 * c.beta0);
        for (int m = -3; m <= 3; ++m)
        {
          const double K = k + 2.0 * pi * m;
          const double a = std::abs(K);
          const bool in_zone = (l == 1) ? a <= pi : (a > (l - 1) * pi && a <= l * pi);
          if (!in_zone)
            continue;
          const double tol = 1e-9 * (1.0 + E);
          est_bad = std::max({est_bad, lo * K * K - E - tol, E - hi * K * K - tol});
        }
      }
    }
    const bool this_ok = even <= 1e-9 && mono_bad == 0 && cross_bad == 0 && est_bad <= 0.0;
    ok = ok && this_ok;
    os << name << fmt(": even %.2g mono_bad %d cross_bad %d est_excess %.2g; ", even, mono_bad, cross_bad,
                      std::max(est_bad, 0.0));
  }
  return {ok, os.str()};
}

Outcome effective_coefficient()
{
  const auto e = make_edge(builtin("cosine"), Condition::Cond1);
  const double oracle = std::sqrt(3.0) / 2.0;
  const double err = std::abs(e->b - oracle);
  return {err <= 1e-5, fmt("b = %.10f, |b - sqrt(3)/2| = %.3g", e->b, err)};
}

Outcome isometries()
{
  const auto c = builtin("cosine");
  const double eps = 1.0 / 32;
  bool ok = true;
  std::ostringstream os;

  // Cell Parseval with the full eigenbasis.
  {
    const int N = 16;
    const int dim = 2 * N + 1;
    const double k = 0.7;
    const BandTable tab = band_table(c, {-pi, -k, 0.0, k, pi}, N, dim);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(dim);
    for (int n = 0; n < dim; ++n)
      v[n] = (std::abs(n - N) <= 8) ? cplx(nd(rng), nd(rng)) : cplx{};
    const auto i = *tab.find(k);
    double s = 0.0;
    for (int l = 1; l <= dim; ++l)
      s += std::norm(tab.vec(l, i).dot(v));
    const double rel = std::abs(s - v.squaredNorm()) / v.squaredNorm();
    ok = ok && rel <= 1e-8;
    os << fmt("parseval %.2g; ", rel);
  }

  const auto edge = make_edge(c, Condition::Cond1);
  EdgeContext ctx{c, edge, 24, 0};
  ExperimentSpec spec;
  spec.f.kind = ProfileKind::Bump;
  spec.f.K = 2.0;
  const TorusGrid grid = size_torus(ctx, spec, eps, 1.0);
  const SpectralProfile pf = make_profile(spec.f, grid.dk());
  auto plan = std::make_shared<const SynthesisPlan>(make_plan(c, edge, grid, pf.K + grid.dk(), ctx.N_synth));

  // Round trip.
  {
    const WaveField u = synthesize(*plan, pf);
    const auto back = bloch_coeff(u, *plan, pf.m_max);
    double num = 0.0, den = 0.0;
    for (int m = -pf.m_max; m <= pf.m_max; ++m)
    {
      num += std::norm(back[static_cast<size_t>(m + pf.m_max)] - pf.amp(m));
      den += std::norm(pf.amp(m));
    }
    const double rel = std::sqrt(num / den);
    ok = ok && rel <= 1e-8;
    os << fmt("round trip %.2g; ", rel);
  }

  // Schrodinger unitarity.
  {
    EvolutionSpec s0{Equation::Schrodinger, plan, 0.0, pf, std::nullopt};
    EvolutionSpec s1 = s0;
    s1.t = 1.0;
    const double n0 = evolve_exact(s0).norm();
    const double n1 = evolve_exact(s1).norm();
    const double rel = std::abs(n1 - n0) / n0;
    ok = ok && rel <= 1e-9;
    os << fmt("unitarity %.2g; ", rel);
  }

  // Wave energy, exact and effective.
  {
    ProfileSpec gs = spec.f;
    gs.K = 1.5;
    const SpectralProfile pg = make_profile(gs, grid.dk());
    EvolutionSpec w0{Equation::Wave, plan, 0.0, pf, pg};
    EvolutionSpec w1 = w0;
    w1.t = 1.0;
    const double e0 = wave_energy_exact(w0), e1 = wave_energy_exact(w1);
    const double h0 = wave_energy_effective(w0, *edge), h1 = wave_energy_effective(w1, *edge);
    const double rel = std::abs(e1 - e0) / e0;
    const double rel_h = std::abs(h1 - h0) / h0;
    // The state must actually move, otherwise conservation is vacuous.
    const WaveField u0 = evolve_exact(w0), u1 = evolve_exact(w1);
    const double moved = error_norm(u0, u1) / u0.norm();
    ok = ok && rel <= 1e-9 && rel_h <= 1e-9 && moved > 1e-2;
    os << fmt("wave energy %.2g / effective %.2g (field change %.3g)", rel, rel_h, moved);
  }
  return {ok, os.str()};
}

std::string sweep_detail(const SweepResult &r)
{
  std::string s = r.fitted ? fmt("slope %.4f", r.fitted_slope) : std::string("not fitted");
  s += " (errors";
  for (double e : r.errors)
    s += fmt(" %.3g", e);
  return s + ")";
}

bool slope_in(const SweepResult &r, double lo, double hi)
{
  return r.fitted && r.fitted_slope >= lo && r.fitted_slope <= hi;
}

Outcome schrodinger_convergence()
{
  const auto c = builtin("cosine");
  ExperimentSpec spec;
  spec.f.kind = ProfileKind::Bump;
  spec.f.K = 2.0;
  spec.f.q = 2.0;
  const EdgeContext c1{c, make_edge(c, Condition::Cond1), 24, 0};
  const EdgeContext c3{c, make_edge(c, Condition::Cond3), 24, 0};
  const auto r1 = epsilon_sweep(c1, spec, 1.0, eps4, 1.0);
  const auto r3 = epsilon_sweep(c3, spec, 1.0, eps4, 1.0);
  return {slope_in(r1, 0.9, 1.15) && slope_in(r3, 0.9, 1.15),
          "Cond1 " + sweep_detail(r1) + "; Cond3 " + sweep_detail(r3)};
}

Outcome regularity_rates()
{
  const auto c = builtin("cosine");
  // Cond3: the Cond1 edge of this builtin has |gamma| ~ 3e-3 and e-tilde ~ 2e-3,
  // which pushes the asymptotic regime beyond reachable eps at t = 1.
  const EdgeContext c3{c, make_edge(c, Condition::Cond3), 24, 0};

  ExperimentSpec pl;
  pl.f.kind = ProfileKind::PowerLaw;
  pl.f.K = 40.0;
  pl.f.q = 1.0;
  const auto r_pl = epsilon_sweep(c3, pl, 1.0, eps4, 0.5);

  ExperimentSpec wb;
  wb.equation = Equation::Wave;
  wb.f.kind = ProfileKind::Bump;
  wb.f.K = 2.0;
  wb.f.q = 1.5;
  wb.g = wb.f;
  wb.zero_g = true;
  const auto r_wb = epsilon_sweep(c3, wb, 1.0, eps4, 1.0);

  ExperimentSpec wg;
  wg.equation = Equation::Wave;
  wg.f.kind = ProfileKind::Bump;
  wg.f.K = 2.0;
  wg.g = ProfileSpec{};
  wg.g->kind = ProfileKind::PowerLaw;
  wg.g->K = 40.0;
  wg.g->q = 0.5;
  wg.zero_f = true;
  const auto r_wg = epsilon_sweep(c3, wg, 1.0, eps4, 1.0);

  return {slope_in(r_pl, 0.35, 0.65) && slope_in(r_wb, 0.9, 1.15) && slope_in(r_wg, 0.85, 1.15),
          "schrodinger powerlaw q=1 " + sweep_detail(r_pl) + "; wave bump f " + sweep_detail(r_wb) +
              "; wave powerlaw g r=1/2 " + sweep_detail(r_wg)};
}

Outcome time_growth()
{
  const auto c = builtin("cosine");
  const EdgeContext c1{c, make_edge(c, Condition::Cond1), 24, 0};
  ExperimentSpec spec;
  spec.f.kind = ProfileKind::Bump;
  spec.f.K = 2.0;
  const auto r = time_sweep(c1, spec, 1.0 / 128, {1, 2, 4, 8, 16, 32, 64});
  const bool ok = r.fitted && r.exponent <= 0.6 && std::isfinite(r.sup_ratio);
  return {ok, fmt("t-exponent %.4f, sup error/((1+t^1/2) eps) = %.4g", r.exponent, r.sup_ratio)};
}

Outcome lemma2_windows()
{
  const auto c = builtin("cosine");
  const auto e1 = make_edge(c, Condition::Cond1);
  const auto e3 = make_edge(c, Condition::Cond3);
  const double eps = 1.0 / 64;
  bool ok = true;
  std::ostringstream os;
  for (double q : {1.0, 2.0, 4.0, 5.0})
  {
    const auto r = lemma2_check(SymbolCase::SchrodingerSin, q, eps, 1.0, *e1);
    ok = ok && r.in_window();
    os << fmt("case1 q=%g %.3f in [%.3f, %.3f]; ", q, r.ratio, r.window_lo, r.window_hi);
  }
  // Wave cases at the Cond1 edge need t = 64 to be admissible; Cond3 at t = 1.
  for (const auto &[edge, t] : {std::pair{e1, 64.0}, std::pair{e3, 1.0}})
  {
    for (double q : {1.0, 2.0, 4.0})
    {
      const auto r = lemma2_check(SymbolCase::WaveSin3, q, eps, t, *edge);
      ok = ok && r.in_window();
      os << fmt("case2 %s q=%g %.3f; ", to_string(edge->condition).c_str(), q, r.ratio);
    }
    for (double r_ : {-1.0, 0.5, 2.0, 3.0})
    {
      const auto r = lemma2_check(SymbolCase::WaveSin3InvK, r_, eps, t, *edge);
      ok = ok && r.in_window();
      os << fmt("case3 %s r=%g %.3f; ", to_string(edge->condition).c_str(), r_, r.ratio);
    }
  }
  return {ok, os.str()};
}

Outcome sharpness()
{
  const auto c = builtin("cosine");
  const EdgeContext c1{c, make_edge(c, Condition::Cond1), 24, 0};
  const std::vector<double> eps = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  const auto r1 = sharpness_probe(c1, 1.0, 1.0, eps);
  const auto r2 = sharpness_probe(c1, 2.0, 1.0, eps);
  return {r1.growth() >= 2.0 && r2.spread() <= 1.5,
          fmt("q'=1 growth %.3f; q'=2 spread %.3f", r1.growth(), r2.spread())};
}

Outcome null_test()
{
  const auto f = builtin("free");
  const EdgeContext ctx{f, make_edge(f, Condition::Cond1, 16, true), 8, 0};
  double worst = 0.0;
  ExperimentSpec s;
  s.f.kind = ProfileKind::Bump;
  s.f.K = 2.0;
  ExperimentSpec w = s;
  w.equation = Equation::Wave;
  w.g = s.f;
  w.g->K = 1.5;
  for (const auto &spec : {s, w})
  {
    const auto r = epsilon_sweep(ctx, spec, 1.0, eps4, 1.0);
    for (double e : r.errors)
      worst = std::max(worst, e);
    const auto rt = time_sweep(ctx, spec, 1.0 / 128, {1, 2, 4, 8, 16, 32, 64});
    for (double e : rt.errors)
      worst = std::max(worst, e);
  }
  return {worst <= 1e-8, fmt("max error %.3g", worst)};
}

}  // namespace

int main()
{
  const std::vector<Criterion> criteria = {
      {1, "free-operator oracle", 5, free_oracle},
      {2, "band properties and two-sided estimate", 30, band_properties},
      {3, "effective coefficient", 30, effective_coefficient},
      {4, "isometries", 60, isometries},
      {5, "schrodinger convergence", 600, schrodinger_convergence},
      {6, "regularity-graded rates", 600, regularity_rates},
      {7, "t-growth", 300, time_growth},
      {8, "symbol windows", 60, lemma2_windows},
      {9, "sharpness", 300, sharpness},
      {10, "null test", 60, null_test},
  };
  int failures = 0;
  for (const auto &c : criteria)
  {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception &e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s %d %s [%.1f s / %.0f s]: %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), dt, c.budget_s,
                o.detail.c_str(), in_time ? "" : " (over time budget)");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
