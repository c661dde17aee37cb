// SPDX-License-Identifier: Apache-2.0
#include "hfhom/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hfhom/errors.hpp"

namespace hfhom
{

std::string_view to_string(Errc code)
{
  switch (code)
  {
    case Errc::InvalidCoefficient: return "InvalidCoefficient";
    case Errc::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case Errc::UnknownBuiltin: return "UnknownBuiltin";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EigFailure: return "EigFailure";
    case Errc::KNotInGrid: return "KNotInGrid";
    case Errc::DegenerateEdge: return "DegenerateEdge";
    case Errc::GaugeBreak: return "GaugeBreak";
    case Errc::NoAdmissibleKappa: return "NoAdmissibleKappa";
    case Errc::UnsupportedKind: return "UnsupportedKind";
    case Errc::ZoneOverflow: return "ZoneOverflow";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::NegativeSpectralShift: return "NegativeSpectralShift";
    case Errc::InadmissibleParameters: return "InadmissibleParameters";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap_unit(double x)
{
  double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

}  // namespace

CellFunction CellFunction::constant(double value)
{
  CellFunction f;
  f.kind_ = Kind::Constant;
  f.params_ = std::make_shared<const std::vector<double>>(std::vector<double>{value});
  f.params2_ = std::make_shared<const std::vector<double>>();
  std::ostringstream os;
  os << "constant(" << value << ")";
  f.description_ = os.str();
  return f;
}

CellFunction CellFunction::cosine(double mean, double amplitude)
{
  CellFunction f;
  f.kind_ = Kind::Cosine;
  f.params_ = std::make_shared<const std::vector<double>>(std::vector<double>{mean, amplitude});
  f.params2_ = std::make_shared<const std::vector<double>>();
  std::ostringstream os;
  os << mean << "+" << amplitude << "cos(2pi x)";
  f.description_ = os.str();
  return f;
}

CellFunction CellFunction::fourier(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
{
  if (cos_coeffs.empty())
    throw Error(Errc::InvalidCoefficient, "fourier cell function needs at least the mean term");
  CellFunction f;
  f.kind_ = Kind::Fourier;
  f.params_ = std::make_shared<const std::vector<double>>(std::move(cos_coeffs));
  f.params2_ = std::make_shared<const std::vector<double>>(std::move(sin_coeffs));
  f.description_ = "fourier series";
  return f;
}

CellFunction CellFunction::table(std::vector<double> samples)
{
  if (samples.size() < 2)
    throw Error(Errc::InvalidCoefficient, "table cell function needs at least two samples");
  CellFunction f;
  f.kind_ = Kind::Table;
  f.params_ = std::make_shared<const std::vector<double>>(std::move(samples));
  f.params2_ = std::make_shared<const std::vector<double>>();
  f.description_ = "table";
  return f;
}

CellFunction CellFunction::closure(std::function<double(double)> fn, std::string description)
{
  CellFunction f;
  f.kind_ = Kind::Closure;
  f.params_ = std::make_shared<const std::vector<double>>();
  f.params2_ = std::make_shared<const std::vector<double>>();
  f.fn_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
  f.description_ = std::move(description);
  return f;
}

double CellFunction::operator()(double x) const
{
  const auto &p = *params_;
  double v = 0.0;
  switch (kind_)
  {
    case Kind::Constant:
      v = p[0];
      break;
    case Kind::Cosine:
      v = p[0] + p[1] * std::cos(two_pi * x);
      break;
    case Kind::Fourier:
    {
      const auto &s = *params2_;
      v = p[0];
      for (size_t n = 1; n < p.size(); ++n)
        v += p[n] * std::cos(two_pi * static_cast<double>(n) * x);
      for (size_t n = 1; n < s.size(); ++n)
        v += s[n] * std::sin(two_pi * static_cast<double>(n) * x);
      break;
    }
    case Kind::Table:
    {
      const double y = wrap_unit(x) * static_cast<double>(p.size());
      const auto i = static_cast<size_t>(std::floor(y));
      const double t = y - static_cast<double>(i);
      const size_t i0 = i % p.size();
      const size_t i1 = (i + 1) % p.size();
      v = (1.0 - t) * p[i0] + t * p[i1];
      break;
    }
    case Kind::Closure:
      v = (*fn_)(x);
      break;
  }
  return scale_ * v;
}

CellFunction CellFunction::scaled(double factor) const
{
  CellFunction f = *this;
  f.scale_ *= factor;
  return f;
}

FourierVector fourier_coefficients(const std::vector<double> &samples, int N)
{
  if (N < 0)
    throw Error(Errc::InvalidArgument, "negative Fourier truncation");
  const size_t M = samples.size();
  FourierVector out;
  out.N = N;
  out.c.assign(static_cast<size_t>(2 * N + 1), cplx{});
  for (int n = 0; n <= N; ++n)
  {
    // Angle reduced modulo M keeps the twiddles exact for large n*j.
    cplx acc{};
    for (size_t j = 0; j < M; ++j)
    {
      const auto r = (static_cast<size_t>(n) * j) % M;
      const double ang = -two_pi * static_cast<double>(r) / static_cast<double>(M);
      acc += samples[j] * cplx(std::cos(ang), std::sin(ang));
    }
    acc /= static_cast<double>(M);
    out.at(n) = acc;
    if (n > 0)
      out.at(-n) = std::conj(acc);
  }
  out.at(0) = cplx(out[0].real(), 0.0);
  return out;
}

FourierVector fourier_coefficients(const CellFunction &f, int N)
{
  if (N < 1)
    throw Error(Errc::InvalidArgument, "Fourier truncation must be >= 1");
  // Power of two at or above 8N points.
  size_t M = 8;
  while (M < static_cast<size_t>(8 * N))
    M *= 2;
  std::vector<double> samples(M);
  for (size_t j = 0; j < M; ++j)
    samples[j] = f(static_cast<double>(j) / static_cast<double>(M));
  return fourier_coefficients(samples, N);
}

namespace
{

std::vector<double> sample(const std::function<double(double)> &fn, int N)
{
  size_t M = 8;
  while (M < static_cast<size_t>(8 * N))
    M *= 2;
  std::vector<double> s(M);
  for (size_t j = 0; j < M; ++j)
    s[j] = fn(static_cast<double>(j) / static_cast<double>(M));
  return s;
}

}  // namespace

FourierVector PeriodicCoefficients::g_fourier(int N) const
{
  return fourier_coefficients(sample([this](double x) { return g(x); }, 2 * N), 2 * N);
}

FourierVector PeriodicCoefficients::omega_sq_fourier(int N) const
{
  return fourier_coefficients(sample([this](double x) {
                                const double w = omega(x);
                                return w * w;
                              }, 2 * N),
                              2 * N);
}

FourierVector PeriodicCoefficients::omega_fourier(int N) const
{
  return fourier_coefficients(omega, N);
}

PeriodicCoefficients validate(CellFunction g_check, CellFunction omega, int n_samples, std::string name)
{
  if (n_samples < 64)
    throw Error(Errc::InvalidArgument, "validation needs at least 64 samples");

  double a0 = std::numeric_limits<double>::infinity(), a1 = -a0;
  double b0 = a0, b1 = -a0, norm_sq = 0.0;
  for (int j = 0; j < n_samples; ++j)
  {
    const double x = static_cast<double>(j) / n_samples;
    const double gv = g_check(x), wv = omega(x);
    if (!std::isfinite(gv) || !std::isfinite(wv))
    {
      std::ostringstream os;
      os << "non-finite sample at x=" << x;
      throw Error(Errc::InvalidCoefficient, os.str());
    }
    if (gv <= 0.0 || wv <= 0.0)
    {
      std::ostringstream os;
      os << (gv <= 0.0 ? "g_check" : "omega") << " is non-positive at x=" << x;
      throw Error(Errc::NonPositiveCoefficient, os.str());
    }
    a0 = std::min(a0, gv);
    a1 = std::max(a1, gv);
    b0 = std::min(b0, wv);
    b1 = std::max(b1, wv);
    norm_sq += wv * wv;
  }
  const double norm = std::sqrt(norm_sq / n_samples);

  PeriodicCoefficients c;
  c.g_check = std::move(g_check);
  c.omega = norm == 1.0 ? std::move(omega) : omega.scaled(1.0 / norm);
  c.name = std::move(name);
  c.n_samples = n_samples;
  c.alpha0 = a0;
  c.alpha1 = a1;
  c.beta0 = b0 / norm;
  c.beta1 = b1 / norm;
  return c;
}

PeriodicCoefficients builtin(std::string_view name)
{
  if (name == "free")
    return validate(CellFunction::constant(1.0), CellFunction::constant(1.0), 256, "free");
  if (name == "cosine")
    return validate(CellFunction::cosine(1.0, 0.5), CellFunction::constant(1.0), 256, "cosine");
  if (name == "weighted")
    return validate(CellFunction::constant(1.0),
                    CellFunction::closure([](double x) { return std::exp(0.2 * std::cos(two_pi * x)); },
                                          "exp(0.2cos(2pi x))"),
                    256, "weighted");
  throw Error(Errc::UnknownBuiltin, std::string(name));
}

std::vector<std::string> builtin_names() { return {"free", "cosine", "weighted"}; }

}  // namespace hfhom
