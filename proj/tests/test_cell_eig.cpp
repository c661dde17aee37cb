// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "hfhom/cell_eig.hpp"
#include "hfhom/errors.hpp"

using namespace hfhom;

namespace
{
constexpr double pi = std::numbers::pi;

// Conservative second-order finite differences for -(g u')' = E u on a
// periodic cell with Bloch phase e^{ik}; omega = 1.
Eigen::VectorXd fd_bands(const CellFunction &g, double k, int n, int count)
{
  const double h = 1.0 / n;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  const cplx wrap = std::polar(1.0, k);
  for (int j = 0; j < n; ++j)
  {
    const double gp = g((j + 0.5) * h), gm = g((j - 0.5) * h);
    A(j, j) = (gp + gm) / (h * h);
    const int jp = (j + 1) % n, jm = (j + n - 1) % n;
    A(j, jp) += -gp / (h * h) * (j == n - 1 ? wrap : cplx(1.0));
    A(j, jm) += -gm / (h * h) * (j == 0 ? std::conj(wrap) : cplx(1.0));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().head(count);
}

// Richardson-extrapolated finite-difference oracle.
Eigen::VectorXd fd_oracle(const CellFunction &g, double k, int count)
{
  const Eigen::VectorXd a = fd_bands(g, k, 384, count);
  const Eigen::VectorXd b = fd_bands(g, k, 768, count);
  return (4.0 * b - a) / 3.0;
}
}  // namespace

TEST_CASE("free assembly is diagonal")
{
  const auto c = builtin("free");
  for (double k : {0.0, 0.5})
  {
    const auto op = assemble(c, k, 8);
    for (int m = -8; m <= 8; ++m)
      for (int n = -8; n <= 8; ++n)
      {
        const cplx s = op.stiffness(m + 8, n + 8), gm = op.gram(m + 8, n + 8);
        if (m == n)
        {
          CHECK(std::abs(s - std::pow(2 * pi * n + k, 2)) < 1e-10);
          CHECK(std::abs(gm - 1.0) < 1e-14);
        }
        else
        {
          CHECK(std::abs(s) < 1e-12);
          CHECK(std::abs(gm) < 1e-14);
        }
      }
  }
}

TEST_CASE("assembled matrices are Hermitian and the gram is positive")
{
  for (const auto &name : builtin_names())
  {
    const auto op = assemble(builtin(name), 1.1, 16);
    CHECK((op.stiffness - op.stiffness.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((op.gram - op.gram.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.gram, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("free solve and closed forms")
{
  const auto r = solve_bands(assemble(builtin("free"), 0.5, 16), 3);
  CHECK(r.values[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.values[1] == doctest::Approx(std::pow(2 * pi - 0.5, 2)).epsilon(1e-12));
  CHECK(r.values[2] == doctest::Approx(std::pow(2 * pi + 0.5, 2)).epsilon(1e-12));
  CHECK(r.max_residual <= 1e-8);

  CHECK(free_band(1, 0.5) == doctest::Approx(0.25));
  CHECK(free_band(2, pi / 2) == doctest::Approx(std::pow(1.5 * pi, 2)));
  CHECK(free_band(3, 0.0) == doctest::Approx(4 * pi * pi));
}

TEST_CASE("cosine bands match the finite-difference oracle")
{
  const auto c = builtin("cosine");
  for (double k : {0.0, pi})
  {
    const auto r = solve_bands(assemble(c, k, 32), 2);
    const auto fd = fd_oracle(c.g_check, k, 2);
    CHECK(std::abs(r.values[0] - fd[0]) < 1e-6 * (1 + fd[0]));
    CHECK(std::abs(r.values[1] - fd[1]) < 1e-6 * (1 + fd[1]));
  }
  const auto at_pi = solve_bands(assemble(c, pi, 32), 2);
  CHECK(at_pi.values[1] - at_pi.values[0] > 0.1);
}

TEST_CASE("band table invariants")
{
  const auto c = builtin("cosine");
  const auto tab = band_table(c, uniform_grid(-pi, pi, 65), 32, 4);
  for (int l = 1; l <= 4; ++l)
    for (size_t i = 0; i < tab.size(); ++i)
    {
      CHECK(std::abs(tab.energy(l, i) - tab.energy(l, tab.size() - 1 - i)) < 1e-9);
      if (l < 4)
        CHECK(tab.energy(l, i) <= tab.energy(l + 1, i));
    }
  for (size_t i : {size_t{0}, size_t{20}, size_t{32}})
    for (int l = 1; l <= 4; ++l)
      for (int m = 1; m <= 4; ++m)
      {
        const cplx ip = tab.vec(l, i).dot(tab.vec(m, i));
        CHECK(std::abs(ip - (l == m ? 1.0 : 0.0)) < 1e-8);
      }

  // Galerkin convergence.
  const auto fine = band_table(c, uniform_grid(-pi, pi, 65), 64, 1);
  for (size_t i = 0; i < tab.size(); ++i)
    CHECK(std::abs(fine.energy(1, i) - tab.energy(1, i)) < 1e-8);
}

TEST_CASE("weighted first band two-sided estimate")
{
  const auto c = builtin("weighted");
  const auto tab = band_table(c, uniform_grid(-pi, pi, 65), 32, 1);
  const double lo = c.alpha0 * c.beta0 * c.beta0 / (c.beta1 * c.beta1);
  const double hi = c.alpha1 * c.beta1 * c.beta1 / (c.beta0 * c.beta0);
  for (size_t i = 0; i < tab.size(); ++i)
  {
    const double k = tab.kgrid[i];
    CHECK(tab.energy(1, i) >= lo * k * k - 1e-12);
    CHECK(tab.energy(1, i) <= hi * k * k + 1e-12);
  }
}

TEST_CASE("bloch functions")
{
  const auto tab = band_table(builtin("free"), uniform_grid(-pi, pi, 65), 16, 2);
  const std::vector<double> xs = {0.0, 0.1, 0.37, 0.5, 0.9};
  const auto v0 = evaluate_bloch(tab, 1, 0.0, xs);
  for (const auto &v : v0)
    CHECK(std::abs(v - 1.0) < 1e-12);
  const double k = tab.kgrid[36];
  for (const auto &v : evaluate_bloch(tab, 1, k, xs))
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
  CHECK_THROWS_AS(evaluate_bloch(tab, 1, 0.123, xs), Error);

  // Cosine ground state at k = 0 is real and positive.
  const auto ct = band_table(builtin("cosine"), uniform_grid(-pi, pi, 65), 32, 1);
  for (double x = 0.0; x < 1.0; x += 0.05)
  {
    const cplx v = evaluate_bloch(ct, 1, 0.0, {x})[0];
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(v.real() > 0.0);
  }
}

TEST_CASE("interpolation is exact at nodes")
{
  const auto tab = band_table(builtin("cosine"), uniform_grid(-pi, pi, 33), 16, 2);
  for (size_t i = 0; i < tab.size(); i += 5)
  {
    CHECK(interp_energy(tab, 2, tab.kgrid[i]) == doctest::Approx(tab.energy(2, i)).epsilon(1e-14));
    CHECK((interp_vector(tab, 1, tab.kgrid[i]) - tab.vec(1, i)).norm() < 1e-14);
  }
}
