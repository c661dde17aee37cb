// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hfhom::cli
{

/// Run configuration shared by all subcommands. Read from a key = value
/// file, then overridden by flags.
struct RunConfig
{
  std::string coeffs = "cosine";
  int s = 1;
  std::string condition = "auto";  ///< cond1..cond4 or auto
  int N = 64;
  int kgrid = 257;
  int refine = 2;
  int bands = 5;
  int N_synth = 24;
  int P = 0;  ///< 0: chosen from eigenvector decay
  std::string out = "out";
  std::uint64_t seed = 1;
  bool allow_degenerate = false;

  std::string equation = "schrodinger";
  std::string profile = "bump";
  double K = 2.0;
  double q = 2.0;
  double delta = 0.05;
  double center = 1.0;
  double width = 0.05;
  std::string g_profile = "none";  ///< none, zero, or a profile kind
  double g_K = 2.0;
  double g_q = 0.5;
  bool zero_f = false;

  double t = 1.0;
  std::vector<double> eps = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  std::vector<double> times = {1, 2, 4, 8, 16, 32, 64};
  std::string sweep = "eps";  ///< eps or time
  double theory_slope = 1.0;
  double slope_tol = 0.15;
  double max_exponent = 0.6;
  double null_floor = 1e-8;

  std::string lemma_case = "schrodinger_sin";
  std::vector<double> lemma_q = {1, 2, 4, 5};
  std::string lemma1_variant = "plain";
  int trials = 20;

  double q_prime = 1.0;
  double rel_width = 0.05;

  int field_stride = 1;
};

/// Parses key = value lines. '#' starts a comment, [section] headers are
/// ignored, lists use [a, b, c], strings may be quoted. Throws ParseError
/// for malformed lines and ValidationError for bad values.
RunConfig parse_config(const std::string &text, RunConfig base = {});
RunConfig load_config(const std::string &path, RunConfig base = {});

/// Applies one key = value override. Throws ParseError / ValidationError.
void apply_setting(RunConfig &cfg, const std::string &key, const std::string &value);

/// Canonical text form; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig &cfg);

/// Cross-field checks. Throws ValidationError.
void validate(const RunConfig &cfg);

bool operator==(const RunConfig &a, const RunConfig &b);

}  // namespace hfhom::cli
