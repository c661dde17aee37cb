// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hfhom/band_edge.hpp"
#include "hfhom/bloch_synthesis.hpp"
#include "hfhom/coefficients.hpp"
#include "hfhom/dynamics.hpp"

namespace hfhom
{

/// Everything a dynamics experiment needs besides the profiles.
struct EdgeContext
{
  PeriodicCoefficients coeffs;
  std::shared_ptr<const BandEdgeData> edge;
  int N_synth = 24;  ///< Fourier cutoff for the per-torus band solves
  int P = 0;         ///< points per cell; 0 picks it from the eigenvector decay
};

/// Smallest power of two P >= 8 such that every window eigenvector has
/// l2 tail below tol beyond |n| >= P/2.
int choose_points_per_cell(const BandEdgeData &edge, double tol = 1e-12, int P_max = 1024);

/// Largest relative drift speed between the exact and effective packets,
/// d/dxi of the phase-rate difference over xi in [k_lo, k_hi].
double max_drift_speed(const BandEdgeData &edge, Equation eq, double eps, double k_lo, double k_hi);

struct ExperimentSpec
{
  Equation equation = Equation::Schrodinger;
  ProfileSpec f;
  std::optional<ProfileSpec> g;  ///< Wave only
  /// Wave: drop f (f = 0); g then carries the regularity label.
  bool zero_f = false;
  /// Wave: drop g (g = 0); g still fixes the frequency grid layout.
  bool zero_g = false;
};

/// Torus whose frequency step resolves the profile and the exact/effective
/// phase mismatch up to t_max. Both fields live on the same torus, so
/// wrap-around of the packets themselves does not bias the error.
TorusGrid size_torus(const EdgeContext &ctx, const ExperimentSpec &spec, double eps, double t_max);

/// eps |t|^{-1/2} <= e (Schrodinger) or eps |t|^{-1} <= e-tilde (Wave).
bool admissible(const BandEdgeData &edge, Equation eq, double eps, double t);

struct PointResult
{
  double eps = 0.0;
  double t = 0.0;
  double error = 0.0;           ///< x-grid L2 error
  double spectral_error = 0.0;  ///< Plancherel evaluation of the same error
  double hq_norm = 0.0;         ///< ||f||_{H^q} (or ||g||_{H^r} when f = 0)
  double exact_norm = 0.0;
  int n_cells = 0;
  int P = 0;
  bool admissible = false;
};

struct PointFields
{
  PointResult result;
  WaveField exact;
  WaveField approx;
};

/// One (eps, t) run keeping the exact and approximate fields.
PointFields evolve_point(const EdgeContext &ctx, const ExperimentSpec &spec, double eps, double t);

PointResult run_point(const EdgeContext &ctx, const ExperimentSpec &spec, double eps, double t);

struct LineFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< rms residual in log space
  int n = 0;
};

/// Ordinary least squares of log y against log x.
LineFit ols_loglog(const std::vector<double> &x, const std::vector<double> &y);

struct SweepResult
{
  Equation equation = Equation::Schrodinger;
  double t = 0.0;
  std::vector<double> eps_values;
  std::vector<double> errors;
  std::vector<double> spectral_errors;
  std::vector<double> hq_norms;
  std::vector<bool> admissibility;
  std::vector<double> slope_partial;  ///< consecutive-point slopes, NaN first
  std::vector<PointResult> points;
  bool fitted = false;  ///< false for the null case or < 2 admissible points
  double fitted_slope = 0.0;
  double fit_residual = 0.0;
  double theory_slope = 0.0;
};

/// Errors below this are treated as exact (null case) and not fitted.
inline constexpr double null_error_floor = 1e-10;

/// Throws InvalidArgument unless eps is strictly decreasing and positive.
SweepResult epsilon_sweep(const EdgeContext &ctx, const ExperimentSpec &spec, double t,
                          const std::vector<double> &eps_values, double theory_slope);

struct TimeSweepResult
{
  Equation equation = Equation::Schrodinger;
  double eps = 0.0;
  std::vector<double> t_values;
  std::vector<double> errors;
  std::vector<bool> admissibility;
  std::vector<PointResult> points;
  bool fitted = false;
  double exponent = 0.0;
  double fit_residual = 0.0;
  double sup_ratio = 0.0;  ///< max error / ((1 + t^{1/2}) eps)
};

TimeSweepResult time_sweep(const EdgeContext &ctx, const ExperimentSpec &spec, double eps,
                           const std::vector<double> &t_values);

enum class SymbolCase
{
  SchrodingerSin,
  WaveSin3,
  WaveSin3InvK,
};

std::string to_string(SymbolCase c);
SymbolCase symbol_case_from_string(const std::string &s);

struct SymbolCheck
{
  SymbolCase kase = SymbolCase::SchrodingerSin;
  double q_or_r = 0.0;
  double eps = 0.0;
  double t = 0.0;
  double grid_sup = 0.0;
  double formula_value = 0.0;
  double ratio = 0.0;
  bool large_exponent = false;  ///< q > 4, q > 3 or r > 2 branch
  double window_lo = 0.0;
  double window_hi = 0.0;

  bool in_window() const noexcept { return ratio >= window_lo && ratio <= window_hi; }
};

/// Grid sup of the symbol on |k - k0| <= kappa against the asymptotic
/// expression. Throws InadmissibleParameters.
SymbolCheck lemma2_check(SymbolCase kase, double q_or_r, double eps, double t, const BandEdgeData &edge,
                         int n_grid = 100000);

enum class Lemma1Variant
{
  Plain,
  InverseK,
};

std::string to_string(Lemma1Variant v);
Lemma1Variant lemma1_variant_from_string(const std::string &s);

struct Lemma1Result
{
  Lemma1Variant variant = Lemma1Variant::Plain;
  double q_or_r = 0.0;
  double eps = 0.0;
  int trials = 0;
  double max_ratio = 0.0;
  double normalized = 0.0;  ///< max_ratio / eps^{min(1,q)} or / eps^{min(0,r)}
  double bound = 0.0;       ///< multiplier norm times the symbol constant

  bool bounded() const noexcept { return normalized <= bound * (1.0 + 1e-6); }
};

/// Random band-limited trials of the edge-corrected synthesis error at
/// scale 1. The edge window must be the uniform 2 pi-periodic table.
Lemma1Result lemma1_check(const BandEdgeData &edge, double q_or_r, double eps, Lemma1Variant variant, int trials,
                          std::uint64_t seed);

struct SharpnessPoint
{
  double eps = 0.0;
  double center = 0.0;  ///< profile centre in the scaled frequency
  double error = 0.0;
  double hq_norm = 0.0;
  double ratio = 0.0;   ///< error / (eps ||f||_{H^q'})
};

struct SharpnessResult
{
  double q_prime = 0.0;
  double t = 0.0;
  std::vector<SharpnessPoint> points;

  double growth() const;      ///< last ratio / first ratio
  double spread() const;      ///< max ratio / min ratio
};

/// Schrodinger point-profile probe at the frequency where the dispersion
/// phase first reaches pi/2. Throws InadmissibleParameters.
SharpnessResult sharpness_probe(const EdgeContext &ctx, double q_prime, double t,
                                const std::vector<double> &eps_values, double rel_width = 0.05);

/// Centre delta of the probe in the unscaled quasimomentum offset.
double sharpness_center(const BandEdgeData &edge, double eps, double t);

}  // namespace hfhom
