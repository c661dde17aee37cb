// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "hfhom/errors.hpp"

namespace
{

const char *bands_schema = R"(Outputs:
  bands.csv   k, E1..E<bands>  (band functions on a uniform grid over [-pi, pi])
  bands.json  {coeffs, N, kgrid, bands, gaps: [{s, condition, k0, gap_lower, gap_upper, semi_infinite}]})";

const char *edges_schema = R"(Outputs:
  edge_dispersion.csv  k, energy, gamma, gamma_tilde  (window around k0)
  edge.json            {s, condition, k0, sign, sigma, b, gamma_k0, gamma_tilde_k0, degenerate, kappa,
                        theta_multiplier_norm, frak_e, frak_e_tilde, min_gauge_overlap, coeffs, points_per_cell})";

const char *evolve_schema = R"(Runs one (eps, t) point with eps = first entry of the eps list.
Outputs:
  field_exact.csv, field_approx.csv  x, re, im, abs
  evolve.json  {equation, edge, result: {eps, t, error, spectral_error, hq_norm, exact_norm,
                n_cells, points_per_cell, admissible}})";

const char *sweep_schema = R"(sweep = eps:
  sweep.csv   eps, error, hq_norm, admissible, slope_partial
  sweep.json  {equation, coeffs, edge, t, fitted, fitted_slope, fit_residual, theory_slope, slope_window,
               max_error, null_case, points, pass}
  sweep.svg
sweep = time (eps = first entry of the eps list):
  time_sweep.csv   t, error, admissible, ratio   (ratio = error / ((1 + t^(1/2)) eps))
  time_sweep.json  {equation, coeffs, edge, eps, fitted, exponent, fit_residual, max_exponent, sup_ratio,
                    max_error, null_case, points, pass}
  time_sweep.svg
--assert exits with 2 when the slope (or exponent) window fails.)";

const char *lemma_schema = R"(Outputs:
  lemma.csv   case, q, eps, t, grid_sup, formula, ratio   (symbol sup against the asymptotic expression)
  lemma1.csv  variant, q, eps, trials, max_ratio, normalized, bound, bounded
  lemma.json  {edge, case, t, lemma2: [{q, eps, ratio, window, in_window}], lemma2_pass,
               lemma1_variant, lemma1_seed, lemma1_pass})";

const char *sharpness_schema = R"(Outputs:
  sharpness.csv   eps, ratio   (ratio = error / (eps ||f||_{H^q'}))
  sharpness.json  {edge, q_prime, t, growth, spread, points: [{eps, center, error, hq_norm, ratio}]}
  sharpness.svg)";

}  // namespace

int main(int argc, char **argv)
{
  using namespace hfhom::cli;
  CLI::App app{"Band structure, band-edge data and high-frequency homogenization checks for 1D periodic operators"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string coeffs, condition, out, eps, t;
  int s = 0, N = 0, kgrid = 0;
  long long seed = -1;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--coeffs", coeffs, "builtin coefficient set (free, cosine, weighted)");
    sub->add_option("--s", s, "band index (>= 1)");
    sub->add_option("--condition", condition, "edge condition: auto, cond1..cond4");
    sub->add_option("--N", N, "Fourier cutoff for edge tables");
    sub->add_option("--kgrid", kgrid, "base quasimomentum grid size (odd)");
    sub->add_option("--eps", eps, "eps value or list, e.g. 1/32 or [1/16, 1/32]");
    sub->add_option("--t", t, "time");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--set", sets, "override any config key: --set key=value");
  };

  auto *bands = app.add_subcommand("bands", "band functions on [-pi, pi] and gap classification");
  auto *edges = app.add_subcommand("edges", "band-edge expansion data for one edge");
  auto *evolve = app.add_subcommand("evolve", "exact and approximate dynamics at one (eps, t)");
  auto *sweep = app.add_subcommand("sweep", "convergence sweep in eps or t");
  auto *lemma = app.add_subcommand("lemma", "symbol and edge-correction checks");
  auto *sharp = app.add_subcommand("sharpness", "point-profile sharpness probe");
  bands->footer(bands_schema);
  edges->footer(edges_schema);
  evolve->footer(evolve_schema);
  sweep->footer(sweep_schema);
  lemma->footer(lemma_schema);
  sharp->footer(sharpness_schema);
  bool assert_windows = false;
  sweep->add_flag("--assert", assert_windows, "exit 2 when the acceptance window fails");
  for (auto *sub : {bands, edges, evolve, sweep, lemma, sharp})
    add_common(sub);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_error;
  }

  try
  {
    RunConfig cfg;
    if (!config_path.empty())
      cfg = load_config(config_path);
    if (!coeffs.empty())
      cfg.coeffs = coeffs;
    if (s != 0)
      cfg.s = s;
    if (!condition.empty())
      apply_setting(cfg, "condition", condition);
    if (!eps.empty())
      apply_setting(cfg, "eps", eps.front() == '[' ? eps : "[" + eps + "]");
    if (!t.empty())
      apply_setting(cfg, "t", t);
    if (N != 0)
      cfg.N = N;
    if (kgrid != 0)
      cfg.kgrid = kgrid;
    if (!out.empty())
      cfg.out = out;
    if (seed >= 0)
      cfg.seed = static_cast<std::uint64_t>(seed);
    for (const auto &kv : sets)
    {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw hfhom::Error(hfhom::Errc::ParseError, "--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate(cfg);

    if (bands->parsed())
      return run_bands(cfg, std::cout);
    if (edges->parsed())
      return run_edges(cfg, std::cout);
    if (evolve->parsed())
      return run_evolve(cfg, std::cout);
    if (sweep->parsed())
      return run_sweep(cfg, assert_windows, std::cout);
    if (lemma->parsed())
      return run_lemma(cfg, std::cout);
    return run_sharpness(cfg, std::cout);
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_error;
  }
}
