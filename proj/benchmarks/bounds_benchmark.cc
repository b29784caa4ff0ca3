// Copyright 2026 The deltasvm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bound path against warm-started retraining as n grows with |M| fixed.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <map>
#include <memory>

#include "deltasvm/decisions.h"
#include "deltasvm/delta_bounds.h"
#include "deltasvm/experiment.h"
#include "deltasvm/partial_opt.h"
#include "deltasvm/solver.h"

namespace deltasvm {
namespace {

constexpr std::size_t kCols = 100;
constexpr double kDensity = 0.1;

struct Fixture {
  SparseDataset data;
  Objective obj{0.5, 0.1};
  PrimalDualSolution solution;
  CachedStats stats;
  ModificationSet mods;
};

// One trained fixture per (n, |M|), built on first use.
const Fixture& GetFixture(std::size_t n, std::size_t edits) {
  static std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[{n, edits}];
  if (!slot) {
    slot = std::make_unique<Fixture>();
    slot->data = NormalizeRows(GenerateSynthetic({n, kCols, kDensity, 7}));
    slot->solution = Train(slot->data, slot->obj);
    slot->stats = BuildCachedStats(slot->data, slot->solution);
    slot->mods = GenerateModifications(slot->data, Scenario::kSpot, edits, 11);
  }
  return *slot;
}

void BM_BoundPath(benchmark::State& state) {
  const Fixture& f = GetFixture(state.range(0), state.range(1));
  const OverlayView view(f.data, f.mods);
  for (auto _ : state) {
    const DeltaStats delta = UpdateDeltaStats(f.stats, view, f.solution);
    const double gap = ComputeGap(f.stats, delta, f.obj);
    const BoundEngine engine(f.obj, f.stats, f.solution, delta, gap);
    benchmark::DoNotOptimize(engine.SparseReport());
  }
}

void BM_PartialOptimization(benchmark::State& state) {
  const Fixture& f = GetFixture(state.range(0), state.range(1));
  const OverlayView view(f.data, f.mods);
  const DeltaStats delta = UpdateDeltaStats(f.stats, view, f.solution);
  const PartialPlan plan = MakePartialPlan(Scenario::kSpot, f.mods);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RunPartialPlan(plan, view, f.obj, f.solution, f.stats, delta));
  }
}

void BM_WarmRetrain(benchmark::State& state) {
  const Fixture& f = GetFixture(state.range(0), state.range(1));
  const SparseDataset modified = ApplyModifications(f.data, f.mods);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Train(modified, f.obj, {}, &f.solution));
  }
}

void Sizes(benchmark::internal::Benchmark* b) {
  for (std::int64_t n : {1000, 10000, 100000}) {
    for (std::int64_t m : {1, 10, 100}) b->Args({n, m});
  }
  b->ArgNames({"n", "M"});
}

BENCHMARK(BM_BoundPath)->Apply(Sizes);
BENCHMARK(BM_PartialOptimization)->Apply(Sizes);
BENCHMARK(BM_WarmRetrain)->Apply(Sizes)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace deltasvm

BENCHMARK_MAIN();
