// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <ostream>

#include "config.hpp"
#include "hfhom/analysis.hpp"

namespace hfhom::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_window_failure = 2;

/// Edge data for cfg.s under cfg.condition (auto: first Condition found).
std::shared_ptr<const BandEdgeData> build_edge(const RunConfig &cfg, const PeriodicCoefficients &coeffs);

ExperimentSpec experiment_from(const RunConfig &cfg);
EdgeContext context_from(const RunConfig &cfg);

int run_bands(const RunConfig &cfg, std::ostream &log);
int run_edges(const RunConfig &cfg, std::ostream &log);
int run_evolve(const RunConfig &cfg, std::ostream &log);
int run_sweep(const RunConfig &cfg, bool assert_windows, std::ostream &log);
int run_lemma(const RunConfig &cfg, std::ostream &log);
int run_sharpness(const RunConfig &cfg, std::ostream &log);

}  // namespace hfhom::cli
