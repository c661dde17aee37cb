// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hfhom/cell_eig.hpp"

namespace hfhom
{

enum class Condition
{
  Cond1,
  Cond2,
  Cond3,
  Cond4,
  None,
};

enum class EdgeSide
{
  Min,
  Max,
};

std::string to_string(Condition c);
Condition condition_from_string(const std::string &s);

/// +1 for Cond1/Cond4 (band minimum), -1 for Cond2/Cond3 (band maximum).
int edge_sign(Condition c);
/// 0 for Cond1/Cond2, pi for Cond3/Cond4.
double edge_k0(Condition c);

struct GapReport
{
  int s = 1;
  Condition condition = Condition::None;
  double gap_lower = 0.0;  ///< -inf for the semi-infinite gap
  double gap_upper = 0.0;
  bool semi_infinite = false;
  double k0 = 0.0;
  EdgeSide edge_side = EdgeSide::Min;
};

/// All Conditions satisfied by band s with gap width above gap_tolerance.
std::vector<GapReport> classify(const BandTable &table, int s, double gap_tolerance = 1e-8);

struct EdgeOptions
{
  int fd_step = 2;                 ///< finite-difference spacing in grid steps
  double kappa_cap = 0.9 * 3.14159265358979323846;
  double degeneracy_threshold = 1e-8;
  double gauge_min = 0.9;
  int n_x = 128;                   ///< cell samples for theta
  bool allow_degenerate = false;   ///< keep going when gamma(k0) vanishes (null tests)
};

struct BandEdgeData
{
  int s = 1;
  Condition condition = Condition::None;
  double k0 = 0.0;
  int sign = 1;
  double sigma = 0.0;
  double b = 0.0;
  bool degenerate = false;

  std::vector<double> kgrid;  ///< window grid around k0 (unfolded)
  size_t k0_index = 0;
  std::vector<double> energy;
  std::vector<double> gamma;
  double gamma_at_k0 = 0.0;
  std::vector<double> gamma_tilde;
  double gamma_tilde_at_k0 = 0.0;

  Eigen::VectorXcd phi_k0;                    ///< u-variable Fourier coefficients
  std::vector<Eigen::VectorXcd> phi;          ///< phi(., k) on the window
  std::vector<Eigen::VectorXcd> theta_coeffs; ///< theta(., k) coefficients
  std::vector<double> xgrid;
  Eigen::MatrixXcd theta;                     ///< theta(x_j, k_i): rows x, cols k

  double kappa = 0.0;
  double theta_mult_norm = 0.0;
  double frak_e = 0.0;
  double frak_e_tilde = 0.0;
  double min_gauge_overlap = 1.0;
};

/// Edge table: uniform unfolded window [k0 - pi, k0 + pi] with
/// (n_base - 1) * refine + 1 points, gauge anchored at k0.
BandTable edge_table(const PeriodicCoefficients &coeffs, double k0, int N, int l_max, int n_base = 257,
                     int refine = 2);

BandEdgeData extract_edge(const BandTable &table, const GapReport &report, const EdgeOptions &opts = {});

/// Largest grid radius satisfying the three gamma / gamma-tilde inequality
/// families. Throws NoAdmissibleKappa.
double select_kappa(const BandEdgeData &edge, double kappa_cap);

/// Pointwise re-check of the kappa inequalities at every window point with
/// |k - k0| <= kappa.
bool kappa_admissible(const BandEdgeData &edge, double kappa);

/// max_x (sup_k |theta| + sup_k |d_k theta|) over |k - k0| <= kappa.
double multiplier_norm(const BandEdgeData &edge);
double multiplier_norm(const Eigen::MatrixXcd &theta, const std::vector<double> &kgrid, double k0, double kappa);

/// Tabulated gamma / gamma-tilde at arbitrary k in the window (cubic).
double gamma_at(const BandEdgeData &edge, double k);
double gamma_tilde_at(const BandEdgeData &edge, double k);

/// Fill gamma, gamma-tilde, kappa and the thresholds from window energies
/// alone. Used for injected synthetic dispersion relations.
BandEdgeData edge_from_energies(std::vector<double> kgrid, std::vector<double> energy, double k0, int sign,
                                const EdgeOptions &opts = {});

}  // namespace hfhom
