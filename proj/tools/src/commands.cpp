// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include <json.hpp>

#include "hfhom/errors.hpp"
#include "hfhom/io.hpp"

namespace hfhom::cli
{

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace
{

constexpr double pi = std::numbers::pi;

// JSON has no NaN; keep the key with null.
ordered_json num(double v)
{
  if (std::isfinite(v))
    return v;
  return nullptr;
}

void write_json(const fs::path &p, const ordered_json &j) { write_atomic(p, j.dump(2) + "\n"); }

ProfileSpec profile_from(const std::string &kind, double K, double q, const RunConfig &cfg)
{
  ProfileSpec p;
  p.kind = profile_kind_from_string(kind);
  p.K = K;
  p.q = q;
  p.delta = cfg.delta;
  p.center = cfg.center;
  p.width = cfg.width;
  return p;
}

Condition pick_condition(const BandTable &tab, const RunConfig &cfg)
{
  const auto reports = classify(tab, cfg.s);
  if (cfg.condition == "auto")
  {
    if (reports.empty())
      throw Error(Errc::ValidationError, "band " + std::to_string(cfg.s) + " borders no gap");
    return reports.front().condition;
  }
  return condition_from_string(cfg.condition);
}

ordered_json edge_json(const BandEdgeData &e)
{
  ordered_json j;
  j["s"] = e.s;
  j["condition"] = to_string(e.condition);
  j["k0"] = e.k0;
  j["sign"] = e.sign;
  j["sigma"] = e.sigma;
  j["b"] = e.b;
  j["gamma_k0"] = e.gamma_at_k0;
  j["gamma_tilde_k0"] = e.gamma_tilde_at_k0;
  j["degenerate"] = e.degenerate;
  j["kappa"] = e.kappa;
  j["theta_multiplier_norm"] = e.theta_mult_norm;
  j["frak_e"] = e.frak_e;
  j["frak_e_tilde"] = e.frak_e_tilde;
  j["min_gauge_overlap"] = e.min_gauge_overlap;
  return j;
}

ordered_json point_json(const PointResult &r)
{
  ordered_json j;
  j["eps"] = r.eps;
  j["t"] = r.t;
  j["error"] = r.error;
  j["spectral_error"] = r.spectral_error;
  j["hq_norm"] = r.hq_norm;
  j["exact_norm"] = r.exact_norm;
  j["n_cells"] = r.n_cells;
  j["points_per_cell"] = r.P;
  j["admissible"] = r.admissible;
  return j;
}

}  // namespace

std::shared_ptr<const BandEdgeData> build_edge(const RunConfig &cfg, const PeriodicCoefficients &coeffs)
{
  const int l_max = cfg.s + 1;
  BandTable tab = edge_table(coeffs, 0.0, cfg.N, l_max, cfg.kgrid, cfg.refine);
  const Condition cond = pick_condition(tab, cfg);
  const double k0 = edge_k0(cond);
  if (k0 != 0.0)
    tab = edge_table(coeffs, k0, cfg.N, l_max, cfg.kgrid, cfg.refine);
  for (const auto &r : classify(tab, cfg.s))
  {
    if (r.condition != cond)
      continue;
    EdgeOptions o;
    o.allow_degenerate = cfg.allow_degenerate;
    return std::make_shared<const BandEdgeData>(extract_edge(tab, r, o));
  }
  throw Error(Errc::ValidationError,
              "band " + std::to_string(cfg.s) + " does not satisfy " + to_string(cond) + " for '" + cfg.coeffs + "'");
}

ExperimentSpec experiment_from(const RunConfig &cfg)
{
  ExperimentSpec spec;
  spec.equation = equation_from_string(cfg.equation);
  spec.f = profile_from(cfg.profile, cfg.K, cfg.q, cfg);
  if (cfg.g_profile == "zero")
  {
    spec.g = spec.f;
    spec.zero_g = true;
  }
  else if (cfg.g_profile != "none")
    spec.g = profile_from(cfg.g_profile, cfg.g_K, cfg.g_q, cfg);
  spec.zero_f = cfg.zero_f;
  return spec;
}

EdgeContext context_from(const RunConfig &cfg)
{
  EdgeContext ctx;
  ctx.coeffs = builtin(cfg.coeffs);
  ctx.edge = build_edge(cfg, ctx.coeffs);
  ctx.N_synth = cfg.N_synth;
  ctx.P = cfg.P;
  return ctx;
}

int run_bands(const RunConfig &cfg, std::ostream &log)
{
  const auto coeffs = builtin(cfg.coeffs);
  const auto kg = uniform_grid(-pi, pi, cfg.kgrid);
  const BandTable tab = band_table(coeffs, kg, cfg.N, cfg.bands);

  std::vector<std::string> header{"k"};
  for (int l = 1; l <= cfg.bands; ++l)
    header.push_back("E" + std::to_string(l));
  CsvTable csv(header);
  for (size_t i = 0; i < tab.size(); ++i)
  {
    csv.row().add(tab.kgrid[i]);
    for (int l = 1; l <= cfg.bands; ++l)
      csv.add(tab.energy(l, i));
  }
  const fs::path out(cfg.out);
  csv.write(out / "bands.csv");

  ordered_json j;
  j["coeffs"] = cfg.coeffs;
  j["N"] = cfg.N;
  j["kgrid"] = cfg.kgrid;
  j["bands"] = cfg.bands;
  ordered_json gaps = ordered_json::array();
  for (int s = 1; s < cfg.bands; ++s)
    for (const auto &r : classify(tab, s))
    {
      ordered_json g;
      g["s"] = r.s;
      g["condition"] = to_string(r.condition);
      g["k0"] = r.k0;
      g["gap_lower"] = num(r.gap_lower);
      g["gap_upper"] = r.gap_upper;
      g["semi_infinite"] = r.semi_infinite;
      gaps.push_back(g);
    }
  j["gaps"] = gaps;
  write_json(out / "bands.json", j);
  log << "bands: " << tab.size() << " k-points, " << gaps.size() << " gap edges -> " << out.string() << "\n";
  return exit_ok;
}

int run_edges(const RunConfig &cfg, std::ostream &log)
{
  const auto coeffs = builtin(cfg.coeffs);
  const auto edge = build_edge(cfg, coeffs);
  CsvTable csv({"k", "energy", "gamma", "gamma_tilde"});
  for (size_t i = 0; i < edge->kgrid.size(); ++i)
    csv.row().add(edge->kgrid[i]).add(edge->energy[i]).add(edge->gamma[i]).add(edge->gamma_tilde[i]);
  const fs::path out(cfg.out);
  csv.write(out / "edge_dispersion.csv");
  ordered_json j = edge_json(*edge);
  j["coeffs"] = cfg.coeffs;
  j["points_per_cell"] = choose_points_per_cell(*edge);
  write_json(out / "edge.json", j);
  log << "edge " << to_string(edge->condition) << ": sigma = " << edge->sigma << ", b = " << edge->b
      << ", kappa = " << edge->kappa << "\n";
  return exit_ok;
}

int run_evolve(const RunConfig &cfg, std::ostream &log)
{
  const EdgeContext ctx = context_from(cfg);
  const ExperimentSpec spec = experiment_from(cfg);
  const double eps = cfg.eps.front();
  const PointFields pf = evolve_point(ctx, spec, eps, cfg.t);
  const fs::path out(cfg.out);
  field_table(pf.exact, cfg.field_stride).write(out / "field_exact.csv");
  field_table(pf.approx, cfg.field_stride).write(out / "field_approx.csv");
  ordered_json j;
  j["equation"] = cfg.equation;
  j["edge"] = edge_json(*ctx.edge);
  j["result"] = point_json(pf.result);
  write_json(out / "evolve.json", j);
  log << "evolve: eps = " << eps << ", t = " << cfg.t << ", error = " << pf.result.error << "\n";
  return exit_ok;
}

int run_sweep(const RunConfig &cfg, bool assert_windows, std::ostream &log)
{
  const EdgeContext ctx = context_from(cfg);
  const ExperimentSpec spec = experiment_from(cfg);
  const fs::path out(cfg.out);
  ordered_json j;
  j["equation"] = cfg.equation;
  j["coeffs"] = cfg.coeffs;
  j["edge"] = edge_json(*ctx.edge);
  bool pass = true;

  if (cfg.sweep == "eps")
  {
    const SweepResult r = epsilon_sweep(ctx, spec, cfg.t, cfg.eps, cfg.theory_slope);
    CsvTable csv({"eps", "error", "hq_norm", "admissible", "slope_partial"});
    double worst = 0.0;
    for (size_t i = 0; i < r.eps_values.size(); ++i)
    {
      csv.row().add(r.eps_values[i]).add(r.errors[i]).add(r.hq_norms[i]).add(static_cast<bool>(r.admissibility[i]));
      csv.add(r.slope_partial[i]);
      worst = std::max(worst, r.errors[i]);
    }
    csv.write(out / "sweep.csv");
    const bool null_case = worst <= cfg.null_floor;
    if (null_case)
      pass = true;
    else
      pass = r.fitted && std::abs(r.fitted_slope - cfg.theory_slope) <= cfg.slope_tol;
    j["t"] = cfg.t;
    j["fitted"] = r.fitted;
    j["fitted_slope"] = r.fitted ? num(r.fitted_slope) : ordered_json(nullptr);
    j["fit_residual"] = r.fitted ? num(r.fit_residual) : ordered_json(nullptr);
    j["theory_slope"] = cfg.theory_slope;
    j["slope_window"] = {cfg.theory_slope - cfg.slope_tol, cfg.theory_slope + cfg.slope_tol};
    j["max_error"] = worst;
    j["null_case"] = null_case;
    ordered_json pts = ordered_json::array();
    for (const auto &p : r.points)
      pts.push_back(point_json(p));
    j["points"] = pts;
    write_atomic(out / "sweep.svg",
                 svg_line_chart({{"error", r.eps_values, r.errors}}, "error against eps", true, true));
    log << "sweep: slope = " << (r.fitted ? std::to_string(r.fitted_slope) : std::string("n/a"))
        << ", max error = " << worst << "\n";
  }
  else
  {
    const TimeSweepResult r = time_sweep(ctx, spec, cfg.eps.front(), cfg.times);
    CsvTable csv({"t", "error", "admissible", "ratio"});
    double worst = 0.0;
    for (size_t i = 0; i < r.t_values.size(); ++i)
    {
      const double t = r.t_values[i];
      csv.row().add(t).add(r.errors[i]).add(static_cast<bool>(r.admissibility[i]));
      csv.add(r.errors[i] / ((1.0 + std::sqrt(t)) * r.eps));
      worst = std::max(worst, r.errors[i]);
    }
    csv.write(out / "time_sweep.csv");
    const bool null_case = worst <= cfg.null_floor;
    pass = null_case || (r.fitted && r.exponent <= cfg.max_exponent && std::isfinite(r.sup_ratio));
    j["eps"] = r.eps;
    j["fitted"] = r.fitted;
    j["exponent"] = r.fitted ? num(r.exponent) : ordered_json(nullptr);
    j["fit_residual"] = r.fitted ? num(r.fit_residual) : ordered_json(nullptr);
    j["max_exponent"] = cfg.max_exponent;
    j["sup_ratio"] = num(r.sup_ratio);
    j["max_error"] = worst;
    j["null_case"] = null_case;
    ordered_json pts = ordered_json::array();
    for (const auto &p : r.points)
      pts.push_back(point_json(p));
    j["points"] = pts;
    write_atomic(out / "time_sweep.svg",
                 svg_line_chart({{"error", r.t_values, r.errors}}, "error against t", true, true));
    log << "time sweep: exponent = " << (r.fitted ? std::to_string(r.exponent) : std::string("n/a"))
        << ", sup ratio = " << r.sup_ratio << "\n";
  }
  j["pass"] = pass;
  write_json(out / (cfg.sweep == "eps" ? "sweep.json" : "time_sweep.json"), j);
  if (assert_windows && !pass)
  {
    log << "sweep: acceptance window failed\n";
    return exit_window_failure;
  }
  return exit_ok;
}

int run_lemma(const RunConfig &cfg, std::ostream &log)
{
  const auto coeffs = builtin(cfg.coeffs);
  const auto edge = build_edge(cfg, coeffs);
  const SymbolCase kase = symbol_case_from_string(cfg.lemma_case);
  const Lemma1Variant variant = lemma1_variant_from_string(cfg.lemma1_variant);
  const fs::path out(cfg.out);

  CsvTable l2({"case", "q", "eps", "t", "grid_sup", "formula", "ratio"});
  ordered_json checks = ordered_json::array();
  bool all_in = true;
  for (double q : cfg.lemma_q)
    for (double eps : cfg.eps)
    {
      const SymbolCheck c = lemma2_check(kase, q, eps, cfg.t, *edge);
      l2.row().add(to_string(c.kase)).add(c.q_or_r).add(c.eps).add(c.t).add(c.grid_sup).add(c.formula_value);
      l2.add(c.ratio);
      ordered_json cj;
      cj["q"] = q;
      cj["eps"] = eps;
      cj["ratio"] = c.ratio;
      cj["window"] = {c.window_lo, c.window_hi};
      cj["in_window"] = c.in_window();
      checks.push_back(cj);
      all_in = all_in && c.in_window();
    }
  l2.write(out / "lemma.csv");

  CsvTable l1({"variant", "q", "eps", "trials", "max_ratio", "normalized", "bound", "bounded"});
  bool all_bounded = true;
  for (double q : cfg.lemma_q)
    for (double eps : cfg.eps)
    {
      const Lemma1Result r = lemma1_check(*edge, q, eps, variant, cfg.trials, cfg.seed);
      l1.row().add(to_string(r.variant)).add(r.q_or_r).add(r.eps).add(r.trials).add(r.max_ratio);
      l1.add(r.normalized).add(r.bound).add(r.bounded());
      all_bounded = all_bounded && r.bounded();
    }
  l1.write(out / "lemma1.csv");

  ordered_json j;
  j["edge"] = edge_json(*edge);
  j["case"] = to_string(kase);
  j["t"] = cfg.t;
  j["lemma2"] = checks;
  j["lemma2_pass"] = all_in;
  j["lemma1_variant"] = to_string(variant);
  j["lemma1_seed"] = cfg.seed;
  j["lemma1_pass"] = all_bounded;
  write_json(out / "lemma.json", j);
  log << "lemma: symbol windows " << (all_in ? "ok" : "violated") << ", lemma1 bounds "
      << (all_bounded ? "ok" : "violated") << "\n";
  return exit_ok;
}

int run_sharpness(const RunConfig &cfg, std::ostream &log)
{
  const EdgeContext ctx = context_from(cfg);
  const SharpnessResult r = sharpness_probe(ctx, cfg.q_prime, cfg.t, cfg.eps, cfg.rel_width);
  const fs::path out(cfg.out);
  CsvTable csv({"eps", "ratio"});
  ordered_json pts = ordered_json::array();
  for (const auto &p : r.points)
  {
    csv.row().add(p.eps).add(p.ratio);
    ordered_json pj;
    pj["eps"] = p.eps;
    pj["center"] = p.center;
    pj["error"] = p.error;
    pj["hq_norm"] = p.hq_norm;
    pj["ratio"] = p.ratio;
    pts.push_back(pj);
  }
  csv.write(out / "sharpness.csv");
  ordered_json j;
  j["edge"] = edge_json(*ctx.edge);
  j["q_prime"] = r.q_prime;
  j["t"] = r.t;
  j["growth"] = num(r.growth());
  j["spread"] = num(r.spread());
  j["points"] = pts;
  write_json(out / "sharpness.json", j);
  std::vector<double> xs, ys;
  for (const auto &p : r.points)
  {
    xs.push_back(1.0 / p.eps);
    ys.push_back(p.ratio);
  }
  write_atomic(out / "sharpness.svg", svg_line_chart({{"ratio", xs, ys}}, "ratio against 1/eps", true, true));
  log << "sharpness: growth = " << r.growth() << ", spread = " << r.spread() << "\n";
  return exit_ok;
}

}  // namespace hfhom::cli
