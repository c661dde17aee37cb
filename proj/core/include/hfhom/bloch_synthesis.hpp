// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hfhom/band_edge.hpp"
#include "hfhom/cell_eig.hpp"

namespace hfhom
{

/// Computational torus [-L/2, L/2) with L = n_cells * eps and P samples per
/// eps-cell. Frequencies live on the dual grid k_m = m * 2 pi / L.
struct TorusGrid
{
  double eps = 1.0;
  int n_cells = 2;  ///< even
  int P = 8;        ///< power of two

  long M() const noexcept { return static_cast<long>(n_cells) * P; }
  double L() const noexcept { return n_cells * eps; }
  double dx() const noexcept { return eps / P; }
  double dk() const noexcept;
  double x(long j) const noexcept { return -0.5 * L() + static_cast<double>(j) * dx(); }
  bool same_as(const TorusGrid &o) const noexcept
  {
    return n_cells == o.n_cells && P == o.P && eps == o.eps;
  }
};

/// Smallest torus with L >= L_min and an even number of cells.
TorusGrid make_torus(double eps, double L_min, int P = 8);

enum class ProfileKind
{
  Bump,
  PowerLaw,
  Point,
};

std::string to_string(ProfileKind k);
ProfileKind profile_kind_from_string(const std::string &s);

struct ProfileSpec
{
  ProfileKind kind = ProfileKind::Bump;
  double K = 2.0;        ///< support radius (bump, powerlaw)
  double q = 2.0;        ///< regularity label; powerlaw decay exponent
  double delta = 0.05;   ///< powerlaw margin
  double center = 1.0;   ///< point profile centre
  double width = 0.05;   ///< point profile Gaussian width
  double point_support = 8.0;  ///< point profile support in widths
};

/// (Phi f)(k_m) on the uniform grid k_m = m dk, m = -m_max..m_max.
struct SpectralProfile
{
  ProfileSpec spec;
  double dk = 0.0;
  int m_max = 0;
  std::vector<cplx> amplitudes;  ///< index m + m_max
  double K = 0.0;                ///< max |k| with nonzero amplitude
  double sobolev_q = 0.0;
  double hq_norm = 0.0;
  double tail_mass = 0.0;        ///< powerlaw L2 mass beyond K (relative)

  double k(int m) const noexcept { return m * dk; }
  cplx amp(int m) const { return (m < -m_max || m > m_max) ? cplx{} : amplitudes[static_cast<size_t>(m + m_max)]; }
  double l2_norm() const;
  double h_norm(double q) const;
};

SpectralProfile make_profile(const ProfileSpec &spec, double dk);

/// Frequency support radius a profile spec will occupy.
double profile_support(const ProfileSpec &spec);
/// Spatial extent proxy of the profile, used for torus sizing.
double profile_width(const ProfileSpec &spec);

/// Samples on a torus.
struct WaveField
{
  TorusGrid grid;
  std::vector<cplx> values;
  double eps = 0.0;  ///< 0 for eps-independent (effective) fields

  double norm() const;
};

enum class Direction
{
  Plus,
  Minus,
};

/// Band samples for one (edge, eps, torus): band s at k0 + eps k_m.
struct SynthesisPlan
{
  std::shared_ptr<const BandEdgeData> edge;
  double eps = 0.0;
  Direction direction = Direction::Plus;
  bool shifted = false;
  int s = 1;
  double k0 = 0.0;
  TorusGrid grid;
  int m_min = 0;  ///< sampled band range, m_min <= 0 <= m_max
  int m_max = 0;
  std::shared_ptr<const BandTable> table;

  /// Eigenvector coefficients / energy of band s at k0 + eps * m * dk.
  Eigen::VectorXcd coeffs(int m) const;
  double energy(int m) const;
};

/// Builds the plan, solving band s on the exact sample grid
/// {k0 + eps m dk : k_lo <= m dk <= k_hi}; k_lo <= 0 <= k_hi so the gauge
/// anchor k0 is on the grid.
SynthesisPlan make_plan(const PeriodicCoefficients &coeffs, std::shared_ptr<const BandEdgeData> edge,
                        const TorusGrid &grid, double k_lo, double k_hi, int N);
inline SynthesisPlan make_plan(const PeriodicCoefficients &coeffs, std::shared_ptr<const BandEdgeData> edge,
                               const TorusGrid &grid, double K, int N)
{
  return make_plan(coeffs, std::move(edge), grid, -K, K, N);
}

/// Plan that reads band samples from an existing table by cubic
/// interpolation in k (exact at nodes).
SynthesisPlan make_plan(std::shared_ptr<const BandTable> table, std::shared_ptr<const BandEdgeData> edge,
                        const TorusGrid &grid, double K);

/// Field with the given amplitudes on band s; amplitude m multiplies the
/// Bloch wave at frequency k_m.
WaveField synthesize_amplitudes(const SynthesisPlan &plan, const std::vector<cplx> &amps, int m_max);

WaveField synthesize(const SynthesisPlan &plan, const SpectralProfile &profile);

/// Same construction for any band l of a table (no edge required).
WaveField synthesize_band(const BandTable &table, int l, double k0, bool shifted, const TorusGrid &grid,
                          const std::vector<cplx> &amps, int m_max);

/// Plain inverse Fourier transform of amplitudes onto the torus.
WaveField inverse_transform(const std::vector<cplx> &amps, int m_max, const TorusGrid &grid);
WaveField inverse_transform(const SpectralProfile &profile, const TorusGrid &grid);

/// Discrete Bloch analysis against band l: amplitudes for m = -m_max..m_max.
std::vector<cplx> bloch_coeff(const WaveField &field, const BandTable &table, int l, double k0, bool shifted,
                              int m_max);
std::vector<cplx> bloch_coeff(const WaveField &field, const SynthesisPlan &plan, int m_max);

/// Sum |A_m|^2 dk.
double amplitude_norm(const std::vector<cplx> &amps, double dk);

}  // namespace hfhom
