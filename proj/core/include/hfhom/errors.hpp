// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hfhom
{

enum class Errc
{
  InvalidCoefficient,
  NonPositiveCoefficient,
  UnknownBuiltin,
  InvalidArgument,
  EigFailure,
  KNotInGrid,
  DegenerateEdge,
  GaugeBreak,
  NoAdmissibleKappa,
  UnsupportedKind,
  ZoneOverflow,
  GridMismatch,
  NegativeSpectralShift,
  InadmissibleParameters,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(Errc code);

/// Library-wide exception. The code identifies the failure class; the message
/// carries context such as the offending quasimomentum or epsilon.
class Error : public std::runtime_error
{
public:
  Error(Errc code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
  {
  }

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace hfhom
