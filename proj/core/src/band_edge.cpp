// SPDX-License-Identifier: Apache-2.0
#include "hfhom/band_edge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hfhom/errors.hpp"

namespace hfhom
{

namespace
{
constexpr double pi = std::numbers::pi;
}

std::string to_string(Condition c)
{
  switch (c)
  {
    case Condition::Cond1: return "Cond1";
    case Condition::Cond2: return "Cond2";
    case Condition::Cond3: return "Cond3";
    case Condition::Cond4: return "Cond4";
    case Condition::None: return "None";
  }
  return "None";
}

Condition condition_from_string(const std::string &s)
{
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char ch) { return std::tolower(ch); });
  for (auto c : {Condition::Cond1, Condition::Cond2, Condition::Cond3, Condition::Cond4, Condition::None})
  {
    std::string name = to_string(c);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (l == name)
      return c;
  }
  throw Error(Errc::InvalidArgument, "unknown condition '" + s + "'");
}

int edge_sign(Condition c)
{
  switch (c)
  {
    case Condition::Cond1:
    case Condition::Cond4: return 1;
    case Condition::Cond2:
    case Condition::Cond3: return -1;
    case Condition::None: break;
  }
  throw Error(Errc::InvalidArgument, "no edge sign for Condition None");
}

double edge_k0(Condition c)
{
  switch (c)
  {
    case Condition::Cond1:
    case Condition::Cond2: return 0.0;
    case Condition::Cond3:
    case Condition::Cond4: return pi;
    case Condition::None: break;
  }
  throw Error(Errc::InvalidArgument, "no edge point for Condition None");
}

std::vector<GapReport> classify(const BandTable &table, int s, double gap_tolerance)
{
  if (s < 1 || s > table.l_max() - 1)
    throw Error(Errc::InvalidArgument, "classify needs 1 <= s <= l_max - 1");
  auto i0 = table.find(0.0);
  auto ip = table.find(pi);
  if (!ip)
    ip = table.find(-pi);
  if (!i0 || !ip)
    throw Error(Errc::KNotInGrid, "classification needs k = 0 and k = pi in the grid");

  auto E = [&](int l, size_t i) { return table.energy(l, i); };
  std::vector<GapReport> out;
  auto push = [&](Condition c, double lo, double hi, bool semi) {
    if (!semi && !(hi - lo > gap_tolerance))
      return;
    GapReport r;
    r.s = s;
    r.condition = c;
    r.gap_lower = lo;
    r.gap_upper = hi;
    r.semi_infinite = semi;
    r.k0 = edge_k0(c);
    r.edge_side = edge_sign(c) > 0 ? EdgeSide::Min : EdgeSide::Max;
    out.push_back(r);
  };

  if (s % 2 == 1)
  {
    if (s == 1)
      push(Condition::Cond1, -std::numeric_limits<double>::infinity(), E(1, *i0), true);
    else
      push(Condition::Cond1, E(s - 1, *i0), E(s, *i0), false);
    push(Condition::Cond3, E(s, *ip), E(s + 1, *ip), false);
  }
  else
  {
    push(Condition::Cond2, E(s, *i0), E(s + 1, *i0), false);
    push(Condition::Cond4, E(s - 1, *ip), E(s, *ip), false);
  }
  return out;
}

BandTable edge_table(const PeriodicCoefficients &coeffs, double k0, int N, int l_max, int n_base, int refine)
{
  if (n_base < 9 || refine < 1)
    throw Error(Errc::InvalidArgument, "edge table needs n_base >= 9 and refine >= 1");
  const int n = (n_base - 1) * refine + 1;
  auto grid = uniform_grid(k0 - pi, k0 + pi, n);
  grid[static_cast<size_t>((n - 1) / 2)] = k0;
  BandTableOptions o;
  o.anchor = k0;
  return band_table(coeffs, grid, N, l_max, o);
}

namespace
{

// b, gamma, gamma-tilde from edge.energy on a grid uniform near k0.
void fill_dispersion(BandEdgeData &e, const EdgeOptions &opts)
{
  const size_t i0 = e.k0_index;
  const size_t nk = e.kgrid.size();
  const int st = opts.fd_step;
  const size_t reach = static_cast<size_t>(4 * st);
  if (i0 < reach || i0 + reach >= nk)
    throw Error(Errc::InvalidArgument, "edge window too small for the finite-difference stencil");
  const double h = e.kgrid[i0 + 1] - e.kgrid[i0];
  auto Ei = [&](long off) { return e.energy[static_cast<size_t>(static_cast<long>(i0) + off)]; };

  auto d2 = [&](int step) {
    const double H = h * step;
    return (-Ei(2 * step) + 16.0 * Ei(step) - 30.0 * Ei(0) + 16.0 * Ei(-step) - Ei(-2 * step)) / (12.0 * H * H);
  };
  const double second = (16.0 * d2(st) - d2(2 * st)) / 15.0;

  e.sigma = Ei(0);
  e.b = e.sign * 0.5 * second;
  if (!(e.b > 0.0))
  {
    std::ostringstream os;
    os << "curvature coefficient b=" << e.b << " is not positive";
    throw Error(Errc::DegenerateEdge, os.str());
  }

  e.gamma.assign(nk, 0.0);
  for (size_t i = 0; i < nk; ++i)
  {
    if (i == i0)
      continue;
    const double d = e.kgrid[i] - e.k0;
    const double d2v = d * d;
    e.gamma[i] = (e.energy[i] - e.sigma - e.sign * e.b * d2v) / (d2v * d2v);
  }

  // Least-squares quartic through the 8 nearest neighbours, evaluated at k0.
  Eigen::MatrixXd A(8, 5);
  Eigen::VectorXd y(8);
  int row = 0;
  for (long off : {-4L, -3L, -2L, -1L, 1L, 2L, 3L, 4L})
  {
    const size_t i = static_cast<size_t>(static_cast<long>(i0) + off);
    const double t = (e.kgrid[i] - e.k0) / h;
    double p = 1.0;
    for (int c = 0; c < 5; ++c)
    {
      A(row, c) = p;
      p *= t;
    }
    y(row) = e.gamma[i];
    ++row;
  }
  e.gamma_at_k0 = A.colPivHouseholderQr().solve(y)(0);
  e.gamma[i0] = e.gamma_at_k0;

  const double sb = std::sqrt(e.b);
  e.gamma_tilde.assign(nk, 0.0);
  for (size_t i = 0; i < nk; ++i)
  {
    if (i == i0)
      continue;
    const double ad = std::abs(e.kgrid[i] - e.k0);
    // Rationalized form of the square-root expansion remainder.
    e.gamma_tilde[i] = ad * e.gamma[i] / (sb * ad + std::sqrt(std::abs(e.energy[i] - e.sigma)));
  }
  e.gamma_tilde_at_k0 = e.gamma_at_k0 / (2.0 * sb);
  e.gamma_tilde[i0] = e.gamma_tilde_at_k0;

  e.degenerate = std::abs(e.gamma_at_k0) < opts.degeneracy_threshold * (1.0 + std::abs(e.sigma));
}

void fill_kappa(BandEdgeData &e, const EdgeOptions &opts)
{
  if (e.degenerate)
    e.kappa = std::min(opts.kappa_cap,
                       std::min(e.k0 - e.kgrid.front(), e.kgrid.back() - e.k0));
  else
    e.kappa = select_kappa(e, opts.kappa_cap);
  e.frak_e = std::pow(2.0 * pi, -0.5) * std::sqrt(std::abs(e.gamma_at_k0)) * e.kappa * e.kappa;
  e.frak_e_tilde = std::abs(e.gamma_tilde_at_k0) * std::pow(e.kappa, 3) / (2.0 * pi);
}

}  // namespace

bool kappa_admissible(const BandEdgeData &e, double kappa)
{
  const double g0 = std::abs(e.gamma_at_k0), gt0 = std::abs(e.gamma_tilde_at_k0);
  const double half_sb = 0.5 * std::sqrt(e.b);
  for (size_t i = 0; i < e.kgrid.size(); ++i)
  {
    const double d = e.kgrid[i] - e.k0;
    if (std::abs(d) > kappa * (1.0 + 1e-12))
      continue;
    const double g = std::abs(e.gamma[i]), gt = std::abs(e.gamma_tilde[i]);
    if (g < 0.5 * g0 || g > 1.5 * g0)
      return false;
    if (gt < 0.5 * gt0 || gt > 1.5 * gt0)
      return false;
    if (d * d * gt > half_sb)
      return false;
  }
  return true;
}

double select_kappa(const BandEdgeData &e, double kappa_cap)
{
  if (e.gamma.size() != e.kgrid.size() || e.gamma_tilde.size() != e.kgrid.size())
    throw Error(Errc::InvalidArgument, "gamma tables missing");
  const size_t i0 = e.k0_index;
  const size_t jmax = std::min(i0, e.kgrid.size() - 1 - i0);
  const double g0 = std::abs(e.gamma_at_k0), gt0 = std::abs(e.gamma_tilde_at_k0);
  const double half_sb = 0.5 * std::sqrt(e.b);

  auto good = [&](size_t i) {
    const double d = e.kgrid[i] - e.k0;
    const double g = std::abs(e.gamma[i]), gt = std::abs(e.gamma_tilde[i]);
    return g >= 0.5 * g0 && g <= 1.5 * g0 && gt >= 0.5 * gt0 && gt <= 1.5 * gt0 && d * d * gt <= half_sb;
  };

  // Radii are scanned downward; a radius is admissible when every point
  // inside it passes, so the answer sits just below the innermost failure.
  size_t first_bad = jmax + 1;
  for (size_t j = 1; j <= jmax; ++j)
    if (!good(i0 + j) || !good(i0 - j))
    {
      first_bad = j;
      break;
    }
  double kappa = 0.0;
  for (size_t j = first_bad - 1; j >= 1; --j)
  {
    const double r = std::min(e.kgrid[i0 + j] - e.k0, e.k0 - e.kgrid[i0 - j]);
    if (r <= kappa_cap && r < pi)
    {
      kappa = r;
      break;
    }
  }
  if (!(kappa > 0.0))
    throw Error(Errc::NoAdmissibleKappa, "no grid radius satisfies the kappa inequalities; refine the k-grid");
  return kappa;
}

double multiplier_norm(const Eigen::MatrixXcd &theta, const std::vector<double> &kgrid, double k0, double kappa)
{
  std::vector<size_t> idx;
  for (size_t i = 0; i < kgrid.size(); ++i)
    if (std::abs(kgrid[i] - k0) <= kappa * (1.0 + 1e-12))
      idx.push_back(i);
  if (idx.size() < 2)
    throw Error(Errc::InvalidArgument, "multiplier norm needs at least two points in the window");

  double best = 0.0;
  for (Eigen::Index x = 0; x < theta.rows(); ++x)
  {
    double sup_f = 0.0, sup_d = 0.0;
    auto th = [&](size_t a) { return theta(x, static_cast<Eigen::Index>(idx[a])); };
    auto kk = [&](size_t a) { return kgrid[idx[a]]; };
    const size_t n = idx.size();
    for (size_t a = 0; a < n; ++a)
    {
      sup_f = std::max(sup_f, std::abs(th(a)));
      cplx d;
      if (n < 3)
        d = (th(1) - th(0)) / (kk(1) - kk(0));
      else if (a == 0 || a + 1 == n)
      {
        // Second-order one-sided stencil through three nodes.
        const size_t a0 = a == 0 ? 0 : n - 1, a1 = a == 0 ? 1 : n - 2, a2 = a == 0 ? 2 : n - 3;
        const double h1 = kk(a1) - kk(a0), h2 = kk(a2) - kk(a0);
        d = (th(a1) - th(a0)) * (h2 / (h1 * (h2 - h1))) - (th(a2) - th(a0)) * (h1 / (h2 * (h2 - h1)));
      }
      else
        d = (th(a + 1) - th(a - 1)) / (kk(a + 1) - kk(a - 1));
      sup_d = std::max(sup_d, std::abs(d));
    }
    best = std::max(best, sup_f + sup_d);
  }
  return best;
}

double multiplier_norm(const BandEdgeData &e)
{
  return multiplier_norm(e.theta, e.kgrid, e.k0, e.kappa);
}

namespace
{

double interp_table(const std::vector<double> &g, const std::vector<double> &v, double k)
{
  if (k < g.front() - 1e-12 || k > g.back() + 1e-12)
    throw Error(Errc::KNotInGrid, "point outside the edge window");
  auto it = std::upper_bound(g.begin(), g.end(), k);
  size_t i = static_cast<size_t>(std::max<std::ptrdiff_t>(it - g.begin() - 2, 0));
  i = std::min(i, g.size() - 4);
  double out = 0.0;
  for (size_t a = 0; a < 4; ++a)
  {
    double w = 1.0;
    for (size_t b = 0; b < 4; ++b)
      if (b != a)
        w *= (k - g[i + b]) / (g[i + a] - g[i + b]);
    out += w * v[i + a];
  }
  return out;
}

}  // namespace

double gamma_at(const BandEdgeData &e, double k) { return interp_table(e.kgrid, e.gamma, k); }
double gamma_tilde_at(const BandEdgeData &e, double k) { return interp_table(e.kgrid, e.gamma_tilde, k); }

BandEdgeData edge_from_energies(std::vector<double> kgrid, std::vector<double> energy, double k0, int sign,
                                const EdgeOptions &opts)
{
  if (kgrid.size() != energy.size())
    throw Error(Errc::InvalidArgument, "grid and energy sizes differ");
  BandEdgeData e;
  e.k0 = k0;
  e.sign = sign;
  e.kgrid = std::move(kgrid);
  e.energy = std::move(energy);
  auto it = std::min_element(e.kgrid.begin(), e.kgrid.end(),
                             [k0](double a, double b) { return std::abs(a - k0) < std::abs(b - k0); });
  e.k0_index = static_cast<size_t>(it - e.kgrid.begin());
  if (std::abs(*it - k0) > 1e-12 * (1.0 + std::abs(k0)))
    throw Error(Errc::KNotInGrid, "k0 is not a grid point");
  fill_dispersion(e, opts);
  if (e.degenerate && !opts.allow_degenerate)
    throw Error(Errc::DegenerateEdge, "gamma(k0) vanishes");
  fill_kappa(e, opts);
  return e;
}

BandEdgeData extract_edge(const BandTable &table, const GapReport &report, const EdgeOptions &opts)
{
  if (report.condition == Condition::None)
    throw Error(Errc::InvalidArgument, "extract_edge needs a gap condition");
  if (!table.has_vectors())
    throw Error(Errc::InvalidArgument, "extract_edge needs eigenvectors in the table");
  const int s = report.s;
  const auto i0o = table.find(report.k0);
  if (!i0o)
    throw Error(Errc::KNotInGrid, "edge point k0 not in the table grid");
  const size_t i0 = *i0o;

  // Symmetric window around k0.
  const size_t half = std::min(i0, table.size() - 1 - i0);
  const size_t lo = i0 - half, hi = i0 + half;

  BandEdgeData e;
  e.s = s;
  e.condition = report.condition;
  e.k0 = report.k0;
  e.sign = edge_sign(report.condition);
  e.kgrid.assign(table.kgrid.begin() + static_cast<long>(lo), table.kgrid.begin() + static_cast<long>(hi) + 1);
  e.k0_index = half;
  e.energy.resize(e.kgrid.size());
  for (size_t i = lo; i <= hi; ++i)
    e.energy[i - lo] = table.energy(s, i);

  fill_dispersion(e, opts);
  if (e.degenerate && !opts.allow_degenerate)
  {
    std::ostringstream os;
    os << "|gamma(k0)| = " << std::abs(e.gamma_at_k0) << " below threshold (s=" << s << ", "
       << to_string(report.condition) << ")";
    throw Error(Errc::DegenerateEdge, os.str());
  }

  // Eigenfunction data.
  e.phi.resize(e.kgrid.size());
  for (size_t i = lo; i <= hi; ++i)
    e.phi[i - lo] = table.vec(s, i);
  e.phi_k0 = e.phi[half];
  for (size_t i = 0; i + 1 < e.phi.size(); ++i)
  {
    const cplx z = e.phi[i].dot(e.phi[i + 1]);
    e.min_gauge_overlap = std::min(e.min_gauge_overlap, z.real());
  }

  fill_kappa(e, opts);

  // Gauge continuity is only required where the expansion is used.
  for (size_t i = 0; i + 1 < e.phi.size(); ++i)
  {
    if (std::abs(e.kgrid[i] - e.k0) > e.kappa + 1e-12 || std::abs(e.kgrid[i + 1] - e.k0) > e.kappa + 1e-12)
      continue;
    const cplx z = e.phi[i].dot(e.phi[i + 1]);
    if (z.real() < opts.gauge_min)
    {
      std::ostringstream os;
      os << "neighbour overlap " << z.real() << " at k=" << e.kgrid[i];
      throw Error(Errc::GaugeBreak, os.str());
    }
  }

  const size_t nk = e.kgrid.size();
  e.theta_coeffs.resize(nk);
  for (size_t i = 0; i < nk; ++i)
  {
    if (i == half)
      continue;
    e.theta_coeffs[i] = (e.phi[i] - e.phi_k0) / (e.kgrid[i] - e.k0);
  }
  e.theta_coeffs[half] = (e.phi[half + 1] - e.phi[half - 1]) / (e.kgrid[half + 1] - e.kgrid[half - 1]);

  e.xgrid.resize(static_cast<size_t>(opts.n_x));
  for (int j = 0; j < opts.n_x; ++j)
    e.xgrid[static_cast<size_t>(j)] = static_cast<double>(j) / opts.n_x;
  e.theta.resize(opts.n_x, static_cast<Eigen::Index>(nk));
  for (size_t i = 0; i < nk; ++i)
    for (int j = 0; j < opts.n_x; ++j)
      e.theta(j, static_cast<Eigen::Index>(i)) = eval_fourier(e.theta_coeffs[i], e.xgrid[static_cast<size_t>(j)]);

  e.theta_mult_norm = multiplier_norm(e);
  return e;
}

}  // namespace hfhom
