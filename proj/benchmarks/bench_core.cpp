// SPDX-License-Identifier: Apache-2.0
#include <memory>
#include <numbers>

#include <benchmark/benchmark.h>

#include "hfhom/analysis.hpp"

using namespace hfhom;

namespace
{

void BM_Assemble(benchmark::State &state)
{
  const CellDiscretization disc(builtin("weighted"), static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(disc.assemble(0.7));
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32)->Arg(64);

void BM_SolveBands(benchmark::State &state)
{
  const auto op = assemble(builtin("cosine"), 0.7, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_bands(op, 5));
}
BENCHMARK(BM_SolveBands)->Arg(16)->Arg(32)->Arg(64);

void BM_EdgeTable(benchmark::State &state)
{
  const auto c = builtin("cosine");
  for (auto _ : state)
    benchmark::DoNotOptimize(edge_table(c, 0.0, 16, 2, 129, 1));
}
BENCHMARK(BM_EdgeTable)->Unit(benchmark::kMillisecond);

void BM_Synthesize(benchmark::State &state)
{
  const auto c = builtin("cosine");
  const BandTable tab = edge_table(c, 0.0, 32, 2);
  std::shared_ptr<const BandEdgeData> edge;
  for (const auto &r : classify(tab, 1))
    if (r.condition == Condition::Cond1)
      edge = std::make_shared<const BandEdgeData>(extract_edge(tab, r));
  const double eps = 1.0 / static_cast<double>(state.range(0));
  const auto grid = make_torus(eps, 60.0, 64);
  ProfileSpec ps;
  ps.K = 2.0;
  const auto p = make_profile(ps, grid.dk());
  const auto plan = make_plan(c, edge, grid, p.K + grid.dk(), 24);
  for (auto _ : state)
    benchmark::DoNotOptimize(synthesize(plan, p));
  state.SetItemsProcessed(state.iterations() * grid.M());
}
BENCHMARK(BM_Synthesize)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
