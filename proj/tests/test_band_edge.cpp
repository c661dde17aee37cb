// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "hfhom/band_edge.hpp"
#include "hfhom/errors.hpp"
#include "support.hpp"

using namespace hfhom;

namespace
{
constexpr double pi = std::numbers::pi;

bool has(const std::vector<GapReport> &r, Condition c)
{
  for (const auto &g : r)
    if (g.condition == c)
      return true;
  return false;
}

// Largest grid radius <= cap where the three inequality families hold,
// evaluated from closed-form gamma and gamma-tilde (b = 1).
double kappa_oracle(const std::vector<double> &kg, const std::function<double(double)> &gamma,
                    const std::function<double(double)> &gamma_t, double cap)
{
  const double g0 = gamma(0.0), gt0 = gamma_t(0.0);
  double best = 0.0;
  std::vector<double> radii;
  for (double k : kg)
    if (k > 0.0 && k <= cap)
      radii.push_back(k);
  for (double r : radii)
  {
    bool ok = true;
    for (double k : kg)
    {
      if (std::abs(k) > r + 1e-12 || k == 0.0)
        continue;
      const double g = std::abs(gamma(k)), gt = std::abs(gamma_t(k));
      ok = ok && g >= 0.5 * std::abs(g0) && g <= 1.5 * std::abs(g0);
      ok = ok && gt >= 0.5 * std::abs(gt0) && gt <= 1.5 * std::abs(gt0);
      ok = ok && k * k * gt <= 0.5;
    }
    if (ok)
      best = r;
  }
  return best;
}
}  // namespace

TEST_CASE("condition helpers")
{
  CHECK(edge_sign(Condition::Cond1) == 1);
  CHECK(edge_sign(Condition::Cond4) == 1);
  CHECK(edge_sign(Condition::Cond2) == -1);
  CHECK(edge_sign(Condition::Cond3) == -1);
  CHECK(edge_k0(Condition::Cond1) == 0.0);
  CHECK(edge_k0(Condition::Cond3) == doctest::Approx(pi));
  for (auto c : {Condition::Cond1, Condition::Cond2, Condition::Cond3, Condition::Cond4})
    CHECK(condition_from_string(to_string(c)) == c);
}

TEST_CASE("gap classification")
{
  const auto free_tab = edge_table(builtin("free"), 0.0, 16, 3, 65, 1);
  const auto fr = classify(free_tab, 1);
  REQUIRE(fr.size() == 1);
  CHECK(fr[0].condition == Condition::Cond1);
  CHECK(fr[0].semi_infinite);

  const auto cos_tab = edge_table(builtin("cosine"), 0.0, 32, 3, 65, 1);
  const auto c1 = classify(cos_tab, 1);
  CHECK(has(c1, Condition::Cond1));
  CHECK(has(c1, Condition::Cond3));
  const auto c2 = classify(cos_tab, 2);
  CHECK(has(c2, Condition::Cond4));
}

TEST_CASE("free edge is degenerate")
{
  const auto tab = edge_table(builtin("free"), 0.0, 16, 2, 129, 1);
  const auto r = classify(tab, 1).front();
  CHECK_THROWS_AS(extract_edge(tab, r), Error);
  EdgeOptions o;
  o.allow_degenerate = true;
  const auto e = extract_edge(tab, r, o);
  CHECK(e.degenerate);
  CHECK(e.b == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(e.sigma) < 1e-12);
  CHECK(e.theta_mult_norm < 1e-9);
}

TEST_CASE("cosine Cond1 edge data")
{
  const auto e = test::cosine_edge(Condition::Cond1);
  CHECK(e->sign == 1);
  CHECK(std::abs(e->sigma) < 1e-12);
  CHECK(std::abs(e->b - std::sqrt(3.0) / 2.0) < 1e-6);
  CHECK(e->b > 0.0);
  CHECK(e->theta_mult_norm > 0.0);
  CHECK(std::isfinite(e->theta_mult_norm));

  // Reconstruction of the tabulated energies.
  for (size_t i = 0; i < e->kgrid.size(); ++i)
  {
    const double d = e->kgrid[i] - e->k0;
    const double g = (i == e->k0_index) ? e->gamma_at_k0 : e->gamma[i];
    const double rec = e->sigma + e->sign * e->b * d * d + std::pow(d, 4) * g;
    CHECK(std::abs(rec - e->energy[i]) <= 1e-10 * (1.0 + std::abs(e->sigma)));
  }

  // Square-root expansion on the window.
  for (size_t i = 0; i < e->kgrid.size(); ++i)
  {
    const double d = std::abs(e->kgrid[i] - e->k0);
    if (d == 0.0 || d > e->kappa)
      continue;
    const double lhs = std::sqrt(std::abs(e->energy[i] - e->sigma));
    CHECK(std::abs(lhs - std::sqrt(e->b) * d - d * d * d * e->gamma_tilde[i]) <= 1e-9);
  }

  CHECK(e->gamma_tilde_at_k0 == doctest::Approx(e->gamma_at_k0 / (2.0 * std::sqrt(e->b))).epsilon(0.02));
  CHECK(e->frak_e == doctest::Approx(std::sqrt(std::abs(e->gamma_at_k0) / (2 * pi)) * e->kappa * e->kappa));
  CHECK(e->frak_e_tilde == doctest::Approx(std::abs(e->gamma_tilde_at_k0) * std::pow(e->kappa, 3) / (2 * pi)));
  CHECK(e->min_gauge_overlap > 0.99);
}

TEST_CASE("cosine Cond3 edge data")
{
  const auto e = test::cosine_edge(Condition::Cond3);
  CHECK(e->sign == -1);
  CHECK(e->k0 == doctest::Approx(pi));
  CHECK(e->b > 0.0);
  CHECK(e->kappa > 0.0);
  CHECK(e->kappa < pi);
  CHECK(kappa_admissible(*e, e->kappa));
  CHECK(multiplier_norm(*e) == doctest::Approx(e->theta_mult_norm));

  // theta reproduces phi on the window.
  for (size_t i = 0; i < e->kgrid.size(); i += 7)
  {
    const double d = e->kgrid[i] - e->k0;
    const Eigen::VectorXcd r = e->phi[i] - e->phi_k0 - d * e->theta_coeffs[i];
    CHECK(r.norm() < 1e-12);
  }
}

TEST_CASE("synthetic dispersion relations")
{
  const auto kg = uniform_grid(-pi, pi, 1025);
  std::vector<double> e4(kg.size()), e6(kg.size());
  for (size_t i = 0; i < kg.size(); ++i)
  {
    const double k = kg[i];
    e4[i] = k * k + std::pow(k, 4);
    e6[i] = k * k + std::pow(k, 4) + 10 * std::pow(k, 6);
  }
  const auto a = edge_from_energies(kg, e4, 0.0, 1);
  CHECK(a.b == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.gamma_at_k0 == doctest::Approx(1.0).epsilon(1e-6));
  for (size_t i = 0; i < kg.size(); ++i)
    if (kg[i] != 0.0 && std::abs(kg[i]) > 0.05)
      CHECK(a.gamma[i] == doctest::Approx(1.0).epsilon(1e-6));
  const double ka = kappa_oracle(
      kg, [](double) { return 1.0; },
      [](double k) { return k == 0.0 ? 0.5 : (std::sqrt(1 + k * k) - 1) / (k * k); }, 0.9 * pi);
  CHECK(a.kappa == doctest::Approx(ka));
  CHECK(a.kappa <= std::sqrt(1.25));

  const auto b = edge_from_energies(kg, e6, 0.0, 1);
  const double kb = kappa_oracle(
      kg, [](double k) { return 1.0 + 10 * k * k; },
      [](double k) { return k == 0.0 ? 0.5 : (std::sqrt(1 + k * k + 10 * std::pow(k, 4)) - 1) / (k * k); },
      0.9 * pi);
  CHECK(b.kappa == doctest::Approx(kb));
  CHECK(b.kappa < a.kappa);
}

TEST_CASE("multiplier norm closed form")
{
  const auto kg = uniform_grid(-1.0, 1.0, 201);
  const int nx = 64;
  Eigen::MatrixXcd theta(nx, static_cast<Eigen::Index>(kg.size()));
  for (int j = 0; j < nx; ++j)
    for (size_t i = 0; i < kg.size(); ++i)
      theta(j, static_cast<Eigen::Index>(i)) = std::sin(2 * pi * j / nx) * kg[i];
  CHECK(multiplier_norm(theta, kg, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(nx, static_cast<Eigen::Index>(kg.size()));
  CHECK(multiplier_norm(zero, kg, 0.0, 1.0) == 0.0);
}

TEST_CASE("cosine multiplier norm is stable under grid doubling")
{
  const auto c = builtin("cosine");
  auto norm_at = [&](int refine) {
    const auto tab = edge_table(c, 0.0, 32, 2, 257, refine);
    for (const auto &r : classify(tab, 1))
      if (r.condition == Condition::Cond1)
        return extract_edge(tab, r).theta_mult_norm;
    return 0.0;
  };
  const double a = norm_at(1), b = norm_at(2);
  CHECK(a > 0.0);
  CHECK(std::abs(a - b) <= 1e-3 * b);
}
