// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "hfhom/band_edge.hpp"
#include "hfhom/errors.hpp"

namespace hfhom::test
{

inline std::shared_ptr<const BandEdgeData> make_edge(const PeriodicCoefficients &c, Condition cond, int N = 32,
                                                     bool allow_degenerate = false)
{
  const BandTable tab = edge_table(c, edge_k0(cond), N, 2);
  EdgeOptions o;
  o.allow_degenerate = allow_degenerate;
  for (const auto &r : classify(tab, 1))
    if (r.condition == cond)
      return std::make_shared<const BandEdgeData>(extract_edge(tab, r, o));
  throw Error(Errc::ValidationError, "no such edge");
}

/// Cached cosine edges; building one costs about a second.
inline std::shared_ptr<const BandEdgeData> cosine_edge(Condition cond)
{
  static const auto c = builtin("cosine");
  static const auto e1 = make_edge(c, Condition::Cond1);
  static const auto e3 = make_edge(c, Condition::Cond3);
  return cond == Condition::Cond1 ? e1 : e3;
}

}  // namespace hfhom::test
