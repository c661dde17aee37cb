// SPDX-License-Identifier: Apache-2.0
#include "hfhom/cell_eig.hpp"

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
constexpr double two_pi = 2.0 * pi;

std::string k_context(double k)
{
  std::ostringstream os;
  os.precision(17);
  os << "k=" << k;
  return os.str();
}

}  // namespace

CellDiscretization::CellDiscretization(const PeriodicCoefficients &coeffs, int N) : N_(N)
{
  if (N < 1)
    throw Error(Errc::InvalidArgument, "Galerkin truncation N must be >= 1");
  g_hat_ = coeffs.g_fourier(N);
  w2_hat_ = coeffs.omega_sq_fourier(N);
  w_hat_ = fourier_coefficients(coeffs.omega, 2 * N);

  const int n = size();
  gram_.resize(n, n);
  toeplitz_g_.resize(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
    {
      gram_(r, c) = w2_hat_[r - c];
      toeplitz_g_(r, c) = g_hat_[r - c];
    }
}

CellOperator CellDiscretization::assemble(double k) const
{
  CellOperator op;
  op.k = k;
  op.N = N_;
  const int n = size();
  op.stiffness.resize(n, n);
  for (int r = 0; r < n; ++r)
  {
    const double dr = two_pi * (r - N_) + k;
    for (int c = 0; c < n; ++c)
      op.stiffness(r, c) = dr * (two_pi * (c - N_) + k) * toeplitz_g_(r, c);
  }
  op.gram = gram_;
  return op;
}

Eigen::MatrixXcd CellDiscretization::stiffness_dk(double k) const
{
  const int n = size();
  Eigen::MatrixXcd d(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      d(r, c) = (two_pi * (r + c - 2 * N_) + 2.0 * k) * toeplitz_g_(r, c);
  return d;
}

Eigen::VectorXcd CellDiscretization::to_u(const Eigen::VectorXcd &phi) const
{
  const int n = size();
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
  for (int r = 0; r < n; ++r)
  {
    cplx acc{};
    for (int c = 0; c < n; ++c)
      acc += w_hat_[r - c] * phi(c);
    u(r) = acc;
  }
  return u;
}

double CellDiscretization::rayleigh(double k, const Eigen::VectorXcd &phi) const
{
  const int n = size();
  Eigen::VectorXcd w(n);
  for (int r = 0; r < n; ++r)
    w(r) = (two_pi * (r - N_) + k) * phi(r);
  const double num = (w.adjoint() * toeplitz_g_ * w)(0, 0).real();
  const double den = (phi.adjoint() * gram_ * phi)(0, 0).real();
  return num / den;
}

CellOperator assemble(const PeriodicCoefficients &coeffs, double k, int N)
{
  return CellDiscretization(coeffs, N).assemble(k);
}

HermitianEigResult solve_bands(const CellOperator &op, int l_max)
{
  const auto n = op.stiffness.rows();
  if (l_max < 1 || l_max > n)
    throw Error(Errc::InvalidArgument, "l_max must lie in [1, 2N+1]");

  Eigen::LLT<Eigen::MatrixXcd> llt(op.gram);
  if (llt.info() != Eigen::Success)
    throw Error(Errc::EigFailure, "gram matrix is not positive definite at " + k_context(op.k));
  const auto L = llt.matrixL();

  // C = L^{-1} S L^{-H}
  Eigen::MatrixXcd tmp = L.solve(op.stiffness);
  Eigen::MatrixXcd C = L.solve(tmp.adjoint()).adjoint();
  C = 0.5 * (C + C.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
  if (es.info() != Eigen::Success)
    throw Error(Errc::EigFailure, "Hermitian QR iteration did not converge at " + k_context(op.k));

  HermitianEigResult res;
  res.values = es.eigenvalues().head(l_max);
  res.vectors = llt.matrixU().solve(es.eigenvectors().leftCols(l_max));

  for (int j = 0; j < l_max; ++j)
  {
    const double lam = res.values(j);
    const Eigen::VectorXcd r = op.stiffness * res.vectors.col(j) - lam * (op.gram * res.vectors.col(j));
    const double rel = r.norm() / (1.0 + std::abs(lam));
    res.max_residual = std::max(res.max_residual, rel);
  }
  if (!(res.max_residual <= 1e-8))
  {
    std::ostringstream os;
    os << "residual " << res.max_residual << " above tolerance at " << k_context(op.k);
    throw Error(Errc::EigFailure, os.str());
  }
  return res;
}

double free_band(int l, double k)
{
  if (l < 1)
    throw Error(Errc::InvalidArgument, "band index must be >= 1");
  const double ak = std::abs(k);
  if (l == 1)
    return k * k;
  const int j = l / 2;
  const double v = (l % 2 == 0) ? two_pi * j - ak : two_pi * j + ak;
  return v * v;
}

std::vector<double> uniform_grid(double a, double b, int n)
{
  if (n < 2 || !(b > a))
    throw Error(Errc::InvalidArgument, "uniform grid needs n >= 2 and b > a");
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<double> g(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] = c + h * static_cast<double>(2 * i - (n - 1)) / static_cast<double>(n - 1);
  g.front() = a;
  g.back() = b;
  return g;
}

std::optional<size_t> BandTable::find(double k, double tol) const
{
  auto it = std::lower_bound(kgrid.begin(), kgrid.end(), k - tol * (1.0 + std::abs(k)));
  if (it != kgrid.end() && std::abs(*it - k) <= tol * (1.0 + std::abs(k)))
    return static_cast<size_t>(it - kgrid.begin());
  return std::nullopt;
}

namespace
{

// Rotate degenerate clusters so that dS/dk is diagonal in the cluster,
// ordering the branches as the limit from the side given by dir.
void split_clusters(const CellDiscretization &disc, double k, Eigen::VectorXd &vals, Eigen::MatrixXcd &vecs,
                    int dir, double tol)
{
  const int m = static_cast<int>(vals.size());
  int start = 0;
  while (start < m)
  {
    int end = start + 1;
    while (end < m && std::abs(vals(end) - vals(end - 1)) <= tol * (1.0 + std::abs(vals(end - 1))))
      ++end;
    const int len = end - start;
    if (len > 1)
    {
      const Eigen::MatrixXcd P = vecs.middleCols(start, len);
      const Eigen::MatrixXcd D = P.adjoint() * disc.stiffness_dk(k) * P;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (D + D.adjoint()));
      Eigen::MatrixXcd V = es.eigenvectors();
      if (dir < 0)
        V = V.rowwise().reverse().eval();
      vecs.middleCols(start, len) = P * V;
      const double mean = vals.segment(start, len).mean();
      vals.segment(start, len).setConstant(mean);
    }
    start = end;
  }
}

// Make e^{i k0 x} u(x) real with positive mean (fallback: positive at its
// largest-magnitude sample).
void fix_anchor_phase(Eigen::VectorXcd &c, double k0)
{
  const int n = static_cast<int>(c.size());
  int M = 16;
  while (M < 4 * n)
    M *= 2;
  std::vector<cplx> psi(static_cast<size_t>(M));
  cplx sq{};
  for (int j = 0; j < M; ++j)
  {
    const double x = static_cast<double>(j) / M;
    psi[static_cast<size_t>(j)] = std::polar(1.0, k0 * x) * eval_fourier(c, x);
    sq += psi[static_cast<size_t>(j)] * psi[static_cast<size_t>(j)];
  }
  sq /= static_cast<double>(M);
  const double alpha = std::abs(sq) > 1e-8 ? 0.5 * std::arg(sq) : 0.0;
  const cplx rot = std::polar(1.0, -alpha);

  double mean = 0.0, best = 0.0, best_val = 0.0;
  for (const auto &p : psi)
  {
    const cplx v = rot * p;
    mean += v.real();
    if (std::abs(v) > best)
    {
      best = std::abs(v);
      best_val = v.real();
    }
  }
  mean /= static_cast<double>(M);
  double sign = 1.0;
  if (std::abs(mean) > 1e-6)
    sign = mean > 0 ? 1.0 : -1.0;
  else
    sign = best_val >= 0 ? 1.0 : -1.0;
  c *= sign * rot;
}

struct RawSolve
{
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

}  // namespace

BandTable band_table(const PeriodicCoefficients &coeffs, const std::vector<double> &kgrid, int N, int l_max,
                     const BandTableOptions &opts)
{
  if (kgrid.empty() || !std::is_sorted(kgrid.begin(), kgrid.end()))
    throw Error(Errc::InvalidArgument, "k-grid must be non-empty and sorted");
  const int n = 2 * N + 1;
  if (l_max < 1 || l_max > n)
    throw Error(Errc::InvalidArgument, "l_max must lie in [1, 2N+1]");

  const CellDiscretization disc(coeffs, N);
  const int l_solve = std::min(l_max + 1, n);
  const size_t nk = kgrid.size();

  BandTable table;
  table.kgrid = kgrid;
  table.N = N;
  table.energies.resize(static_cast<Eigen::Index>(nk), l_max);
  table.eigvecs.assign(static_cast<size_t>(l_max), std::vector<Eigen::VectorXcd>(nk));

  std::vector<RawSolve> raw(nk);
  for (size_t i = 0; i < nk; ++i)
  {
    const auto op = disc.assemble(kgrid[i]);
    auto res = solve_bands(op, l_solve);
    for (int j = 0; j < l_solve; ++j)
      res.values(j) = disc.rayleigh(kgrid[i], res.vectors.col(j));
    raw[i] = {std::move(res.values), std::move(res.vectors)};
  }

  // Anchor
  size_t a = 0;
  {
    const double target = opts.anchor.value_or(0.0);
    double best = std::abs(kgrid[0] - target);
    for (size_t i = 1; i < nk; ++i)
      if (std::abs(kgrid[i] - target) < best)
      {
        best = std::abs(kgrid[i] - target);
        a = i;
      }
    if (opts.anchor && best > 1e-12 * (1.0 + std::abs(target)))
      throw Error(Errc::KNotInGrid, "gauge anchor is not a grid point, " + k_context(target));
  }
  table.anchor = kgrid[a];
  table.anchor_index = a;

  auto finish = [&](size_t i, int dir, const std::vector<Eigen::VectorXcd> *prev) {
    Eigen::VectorXd vals = raw[i].values;
    Eigen::MatrixXcd vecs = raw[i].vectors;
    split_clusters(disc, kgrid[i], vals, vecs, dir, opts.degeneracy_tol);
    for (int l = 0; l < l_max; ++l)
    {
      Eigen::VectorXcd c = disc.to_u(vecs.col(l));
      c /= c.norm();
      if (prev == nullptr)
        fix_anchor_phase(c, kgrid[i]);
      else
      {
        const cplx z = (*prev)[static_cast<size_t>(l)].dot(c);
        if (std::abs(z) > 0.0)
          c *= std::conj(z) / std::abs(z);
      }
      table.eigvecs[static_cast<size_t>(l)][i] = std::move(c);
      table.energies(static_cast<Eigen::Index>(i), l) = raw[i].values(l);
    }
  };
  auto column = [&](size_t i) {
    std::vector<Eigen::VectorXcd> v(static_cast<size_t>(l_max));
    for (int l = 0; l < l_max; ++l)
      v[static_cast<size_t>(l)] = table.eigvecs[static_cast<size_t>(l)][i];
    return v;
  };

  finish(a, +1, nullptr);
  for (size_t i = a + 1; i < nk; ++i)
  {
    const auto prev = column(i - 1);
    finish(i, +1, &prev);
  }
  // The leftward march restarts from the anchor with the branch order seen
  // from the left, then re-aligns with the stored anchor vectors.
  if (a > 0)
  {
    std::vector<Eigen::VectorXcd> prev = column(a);
    {
      Eigen::VectorXd vals = raw[a].values;
      Eigen::MatrixXcd vecs = raw[a].vectors;
      split_clusters(disc, kgrid[a], vals, vecs, -1, opts.degeneracy_tol);
      for (int l = 0; l < l_max; ++l)
      {
        Eigen::VectorXcd c = disc.to_u(vecs.col(l));
        c /= c.norm();
        const cplx z = prev[static_cast<size_t>(l)].dot(c);
        if (std::abs(z) > 1e-3)
          c *= std::conj(z) / std::abs(z);
        else
          fix_anchor_phase(c, kgrid[a]);
        prev[static_cast<size_t>(l)] = std::move(c);
      }
    }
    for (size_t i = a; i-- > 0;)
    {
      finish(i, -1, &prev);
      prev = column(i);
    }
  }
  return table;
}

cplx eval_fourier(const Eigen::VectorXcd &c, double x)
{
  const int N = static_cast<int>((c.size() - 1) / 2);
  const double y = x - std::floor(x);
  const cplx step = std::polar(1.0, two_pi * y);
  cplx e = std::polar(1.0, -two_pi * N * y);
  cplx acc{};
  for (int r = 0; r < c.size(); ++r)
  {
    acc += c(r) * e;
    e *= step;
  }
  return acc;
}

std::vector<cplx> evaluate_bloch(const BandTable &table, int l, double k, const std::vector<double> &xgrid)
{
  if (l < 1 || l > table.l_max() || !table.has_vectors())
    throw Error(Errc::InvalidArgument, "band index outside the table");
  const auto idx = table.find(k);
  if (!idx)
    throw Error(Errc::KNotInGrid, k_context(k));
  const auto &c = table.vec(l, *idx);
  std::vector<cplx> out(xgrid.size());
  for (size_t j = 0; j < xgrid.size(); ++j)
    out[j] = eval_fourier(c, xgrid[j]);
  return out;
}

namespace
{

// Four-point stencil start and Lagrange weights for k.
size_t lagrange4(const std::vector<double> &g, double k, double w[4])
{
  if (g.size() < 4)
    throw Error(Errc::InvalidArgument, "cubic interpolation needs at least 4 grid points");
  if (k < g.front() - 1e-12 || k > g.back() + 1e-12)
    throw Error(Errc::KNotInGrid, "interpolation point outside the grid, " + k_context(k));
  auto it = std::upper_bound(g.begin(), g.end(), k);
  size_t i = static_cast<size_t>(std::max<std::ptrdiff_t>(it - g.begin() - 2, 0));
  i = std::min(i, g.size() - 4);
  for (int a = 0; a < 4; ++a)
  {
    double v = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a)
        v *= (k - g[i + static_cast<size_t>(b)]) / (g[i + static_cast<size_t>(a)] - g[i + static_cast<size_t>(b)]);
    w[a] = v;
  }
  return i;
}

}  // namespace

double interp_energy(const BandTable &table, int l, double k)
{
  if (auto idx = table.find(k, 1e-14))
    return table.energy(l, *idx);
  double w[4];
  const size_t i = lagrange4(table.kgrid, k, w);
  double v = 0.0;
  for (size_t a = 0; a < 4; ++a)
    v += w[a] * table.energy(l, i + a);
  return v;
}

Eigen::VectorXcd interp_vector(const BandTable &table, int l, double k)
{
  if (auto idx = table.find(k, 1e-14))
    return table.vec(l, *idx);
  double w[4];
  const size_t i = lagrange4(table.kgrid, k, w);
  Eigen::VectorXcd v = w[0] * table.vec(l, i);
  for (size_t a = 1; a < 4; ++a)
    v += w[a] * table.vec(l, i + a);
  return v;
}

}  // namespace hfhom
