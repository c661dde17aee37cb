// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hfhom/coefficients.hpp"

namespace hfhom
{

/// Galerkin matrices of the cell form at one quasimomentum, in the basis
/// e^{2 pi i n x}, n = -N..N (row/column index n + N), for the phi-variable.
struct CellOperator
{
  double k = 0.0;
  int N = 0;
  Eigen::MatrixXcd stiffness;
  Eigen::MatrixXcd gram;
};

/// Ascending eigenvalues and gram-orthonormal eigenvectors (columns).
struct HermitianEigResult
{
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  double max_residual = 0.0;  ///< max_i |S v - lambda G v| / (1 + |lambda|)
};

/// Precomputed Fourier data of one coefficient pair at truncation N. Assembly
/// at many quasimomenta reuses it.
class CellDiscretization
{
public:
  CellDiscretization(const PeriodicCoefficients &coeffs, int N);

  int N() const noexcept { return N_; }
  int size() const noexcept { return 2 * N_ + 1; }

  /// Any real k is accepted; no folding into the first zone.
  CellOperator assemble(double k) const;

  /// phi-variable coefficient vector -> u = omega phi coefficients on -N..N.
  Eigen::VectorXcd to_u(const Eigen::VectorXcd &phi) const;

  /// Rayleigh quotient int g|phi' + ik phi|^2 / int omega^2 |phi|^2 evaluated
  /// without forming the stiffness matrix (better relative accuracy near 0).
  double rayleigh(double k, const Eigen::VectorXcd &phi) const;

  /// d/dk of the stiffness matrix.
  Eigen::MatrixXcd stiffness_dk(double k) const;

  const FourierVector &g_hat() const noexcept { return g_hat_; }
  const FourierVector &omega_sq_hat() const noexcept { return w2_hat_; }
  const FourierVector &omega_hat() const noexcept { return w_hat_; }

private:
  int N_;
  FourierVector g_hat_, w2_hat_, w_hat_;
  Eigen::MatrixXcd gram_;
  Eigen::MatrixXcd toeplitz_g_;
};

CellOperator assemble(const PeriodicCoefficients &coeffs, double k, int N);

/// Cholesky congruence + dense Hermitian eigensolver. Throws EigFailure.
HermitianEigResult solve_bands(const CellOperator &op, int l_max);

/// Closed-form free band E°_l(k), l >= 1, |k| <= pi.
double free_band(int l, double k);

/// Band functions and gauge-fixed eigenvectors on a sorted quasimomentum grid.
///
/// eigvecs[l][i] holds u-variable Fourier coefficients (modes -N..N) of band
/// l+1 at kgrid[i], normalized in L2(0,1). Tables may also be injected
/// directly (synthetic energies, hand-made eigenvectors).
struct BandTable
{
  std::vector<double> kgrid;
  Eigen::MatrixXd energies;  ///< rows: k index, cols: band index l-1
  std::vector<std::vector<Eigen::VectorXcd>> eigvecs;
  int N = 0;
  double anchor = 0.0;  ///< quasimomentum where the gauge is fixed
  size_t anchor_index = 0;

  int l_max() const noexcept { return static_cast<int>(energies.cols()); }
  size_t size() const noexcept { return kgrid.size(); }
  bool has_vectors() const noexcept { return !eigvecs.empty(); }

  /// Index of k in the grid, within tol.
  std::optional<size_t> find(double k, double tol = 1e-12) const;
  double energy(int l, size_t i) const { return energies(static_cast<Eigen::Index>(i), l - 1); }
  const Eigen::VectorXcd &vec(int l, size_t i) const { return eigvecs.at(static_cast<size_t>(l - 1)).at(i); }
};

struct BandTableOptions
{
  /// Gauge anchor; must be a grid point. Defaults to the grid point nearest 0.
  std::optional<double> anchor;
  /// Relative gap below which eigenvalues are treated as one cluster.
  double degeneracy_tol = 1e-7;
};

BandTable band_table(const PeriodicCoefficients &coeffs, const std::vector<double> &kgrid, int N, int l_max,
                     const BandTableOptions &opts = {});

/// Uniform grid of n points on [a, b].
std::vector<double> uniform_grid(double a, double b, int n);

/// Physical samples of phi_l(., k) for grid point k. Throws KNotInGrid.
std::vector<cplx> evaluate_bloch(const BandTable &table, int l, double k, const std::vector<double> &xgrid);

/// Sum_n c_n e^{2 pi i n x} for a coefficient vector on -N..N.
cplx eval_fourier(const Eigen::VectorXcd &c, double x);

/// Cubic (4-point Lagrange) interpolation of band l at arbitrary k inside the
/// grid. Exact at grid nodes.
double interp_energy(const BandTable &table, int l, double k);
Eigen::VectorXcd interp_vector(const BandTable &table, int l, double k);

}  // namespace hfhom
