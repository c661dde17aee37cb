// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hfhom
{

using cplx = std::complex<double>;

/// A real 1-periodic function on the unit cell [0,1).
///
/// Either a closed-form evaluator, a finite Fourier series, or a table of
/// equispaced samples (piecewise-linear, periodically wrapped). Copies share
/// the immutable underlying representation.
class CellFunction
{
public:
  enum class Kind
  {
    Constant,
    Cosine,
    Fourier,
    Table,
    Closure,
  };

  static CellFunction constant(double value);
  /// mean + amplitude * cos(2 pi x)
  static CellFunction cosine(double mean, double amplitude);
  /// a0 + sum_n cos_coeffs[n] cos(2 pi n x) + sin_coeffs[n] sin(2 pi n x), n >= 1.
  /// cos_coeffs[0] is a0; sin_coeffs[0] is ignored.
  static CellFunction fourier(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);
  static CellFunction table(std::vector<double> samples);
  static CellFunction closure(std::function<double(double)> fn, std::string description);

  double operator()(double x) const;

  /// The same function multiplied by a positive scalar.
  CellFunction scaled(double factor) const;

  Kind kind() const noexcept { return kind_; }
  const std::vector<double> &params() const noexcept { return *params_; }
  const std::vector<double> &params2() const noexcept { return *params2_; }
  const std::string &description() const noexcept { return description_; }

private:
  CellFunction() = default;

  Kind kind_ = Kind::Constant;
  double scale_ = 1.0;
  std::shared_ptr<const std::vector<double>> params_;
  std::shared_ptr<const std::vector<double>> params2_;
  std::shared_ptr<const std::function<double(double)>> fn_;
  std::string description_;
};

/// Fourier coefficients c_n, n = -N..N, stored at index n + N.
struct FourierVector
{
  int N = 0;
  std::vector<cplx> c;

  cplx operator[](int n) const { return (n < -N || n > N) ? cplx{} : c[static_cast<size_t>(n + N)]; }
  cplx &at(int n) { return c.at(static_cast<size_t>(n + N)); }
};

/// Trapezoid-rule Fourier coefficients of a real cell function, on at least
/// 8N points. Conjugate symmetry c_{-n} = conj(c_n) holds exactly.
FourierVector fourier_coefficients(const CellFunction &f, int N);

/// Raw trapezoid coefficients from equispaced samples on [0,1).
FourierVector fourier_coefficients(const std::vector<double> &samples, int N);

/// The validated coefficient pair of A = -w^{-1} d/dx g d/dx w^{-1}, g = w^2 g_check.
struct PeriodicCoefficients
{
  CellFunction g_check = CellFunction::constant(1.0);
  CellFunction omega = CellFunction::constant(1.0);
  std::string name;
  int n_samples = 0;
  double alpha0 = 0.0, alpha1 = 0.0;  ///< grid extrema of g_check
  double beta0 = 0.0, beta1 = 0.0;    ///< grid extrema of omega (after normalization)

  /// Samples of g = omega^2 g_check.
  double g(double x) const
  {
    const double w = omega(x);
    return w * w * g_check(x);
  }

  /// Fourier coefficients of g and of omega^2 up to mode 2N (Galerkin needs m - n).
  FourierVector g_fourier(int N) const;
  FourierVector omega_sq_fourier(int N) const;
  FourierVector omega_fourier(int N) const;
};

/// Checks positivity/finiteness on n_samples points, records bounds, and
/// rescales omega so that its trapezoid L2(0,1) norm is 1.
PeriodicCoefficients validate(CellFunction g_check, CellFunction omega, int n_samples = 256,
                              std::string name = {});

inline PeriodicCoefficients validate(const PeriodicCoefficients &c, int n_samples = 256)
{
  return validate(c.g_check, c.omega, n_samples, c.name);
}

/// Built-in examples: "free", "cosine", "weighted".
PeriodicCoefficients builtin(std::string_view name);

std::vector<std::string> builtin_names();

}  // namespace hfhom
