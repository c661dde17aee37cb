// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hfhom/bloch_synthesis.hpp"

namespace hfhom
{

enum class Equation
{
  Schrodinger,
  Wave,
};

std::string to_string(Equation e);
Equation equation_from_string(const std::string &s);

struct EvolutionSpec
{
  Equation equation = Equation::Schrodinger;
  std::shared_ptr<const SynthesisPlan> plan;
  double t = 0.0;
  SpectralProfile profile_f;
  std::optional<SpectralProfile> profile_g;  ///< Wave only
};

/// Evolved band amplitudes a_m(t) and, for Wave, their time derivative.
struct EvolvedAmplitudes
{
  int m_max = 0;
  std::vector<cplx> value;
  std::vector<cplx> rate;  ///< d/dt, Wave only
  std::vector<double> omega_sq;  ///< spectral shift |E - sigma| / eps^2 (Wave) per m
};

/// Exact evolution multipliers on band s. The common Schrodinger phase
/// e^{-it sigma/eps^2} is split off when strip_phase is set.
EvolvedAmplitudes exact_amplitudes(const EvolutionSpec &spec, bool strip_phase = false);
EvolvedAmplitudes effective_amplitudes(const EvolutionSpec &spec, const BandEdgeData &edge);

WaveField evolve_exact(const EvolutionSpec &spec);
/// d/dt of the exact Wave solution, as a field.
WaveField evolve_exact_rate(const EvolutionSpec &spec);

WaveField evolve_effective(const EvolutionSpec &spec, const BandEdgeData &edge);

/// phi_{k0}(x/eps) [e^{i pi x/eps}] [e^{-it sigma/eps^2}] u0(x).
WaveField modulated_approximant(const WaveField &u0, const BandEdgeData &edge, double eps, double t,
                                Equation equation);

/// Discrete L2 norm of the difference. Throws GridMismatch.
double error_norm(const WaveField &exact, const WaveField &approx);

/// The same error computed from Bloch amplitudes by Plancherel (no x-grid).
double spectral_error(const EvolutionSpec &spec, const BandEdgeData &edge);

/// Wave energy sum (|a'|^2 + omega^2 |a|^2) dk of exact amplitudes.
double wave_energy_exact(const EvolutionSpec &spec);
/// ||d_t v0||^2 + b ||d_x v0||^2 for the effective Wave solution.
double wave_energy_effective(const EvolutionSpec &spec, const BandEdgeData &edge);

}  // namespace hfhom
