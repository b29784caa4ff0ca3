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

#include "deltasvm/experiment.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "json.hpp"
#include "oracles/oracles.h"

namespace deltasvm {
namespace {

TEST(Synthetic, ParseAndGenerate) {
  const auto spec = ParseSyntheticSpec("synthetic:100,20,0.1,7");
  EXPECT_EQ(spec.n, 100u);
  EXPECT_EQ(spec.d, 20u);
  EXPECT_EQ(spec.density, 0.1);
  EXPECT_EQ(spec.seed, 7u);
  EXPECT_EQ(ParseSyntheticSpec("synthetic:5,4,0.5").seed, 0u);
  EXPECT_THROW(ParseSyntheticSpec("synthetic:5,4"), std::invalid_argument);
  EXPECT_THROW(ParseSyntheticSpec("synthetic:5,x,0.1"), std::invalid_argument);

  const auto data = GenerateSynthetic(spec);
  EXPECT_EQ(data.num_rows(), 100u);
  EXPECT_EQ(data.num_cols(), 20u);
  EXPECT_GT(data.nnz(), 100u);
  EXPECT_LT(data.nnz(), 300u);
  EXPECT_EQ(data, GenerateSynthetic(spec));
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    for (const Entry& e : data.row(i)) {
      EXPECT_GT(e.value, 0.0);
      EXPECT_LT(e.value, 1.0);
    }
  }
}

TEST(GenerateModifications, MagnitudeZeroIsEmpty) {
  const auto data = GenerateSynthetic({50, 10, 0.2, 1});
  for (Scenario s : {Scenario::kSpot, Scenario::kInstance, Scenario::kFeature}) {
    EXPECT_TRUE(GenerateModifications(data, s, 0, 3).empty());
  }
}

TEST(GenerateModifications, InstanceTouchesWholeRow) {
  std::vector<std::vector<Entry>> rows{
      {{0, 1.0}, {1, 2.0}, {2, 3.0}, {3, 4.0}, {4, 5.0}}};
  const auto data = SparseDataset::FromRows(6, rows, {1});
  const auto mods = GenerateModifications(data, Scenario::kInstance, 1, 9);
  EXPECT_EQ(mods.size(), 5u);
  EXPECT_EQ(mods.touched_rows().size(), 1u);
  EXPECT_EQ(mods.touched_rows()[0], 0u);
}

TEST(GenerateModifications, SpotAndFeatureShapes) {
  const auto data = GenerateSynthetic({60, 15, 0.3, 2});
  const auto spot = GenerateModifications(data, Scenario::kSpot, 40, 5);
  EXPECT_EQ(spot.size(), 40u);
  const auto feat = GenerateModifications(data, Scenario::kFeature, 3, 5);
  EXPECT_EQ(feat.touched_cols().size(), 3u);
  std::size_t nnz = 0;
  for (std::size_t j : feat.touched_cols()) nnz += data.col(j).size();
  EXPECT_EQ(feat.size(), nnz);
  EXPECT_TRUE(std::equal(spot.edits().begin(), spot.edits().end(),
                         GenerateModifications(data, Scenario::kSpot, 40, 5).edits().begin()));
}

TEST(GenerateModifications, ValuesWithinColumnRange) {
  const auto data = GenerateSynthetic({100, 20, 0.3, 4});
  const auto ranges = ColumnRanges(data);
  const auto mods = GenerateModifications(data, Scenario::kSpot, 1000, 11);
  ASSERT_EQ(mods.size(), 1000u);
  for (const CellEdit& e : mods.edits()) {
    EXPECT_TRUE(ranges[e.col].Contains(e.value)) << e.col;
  }
}

TEST(GenerateModifications, InfeasibleMagnitude) {
  const auto data = GenerateSynthetic({10, 5, 0.3, 4});
  EXPECT_THROW(GenerateModifications(data, Scenario::kSpot, 51, 1), std::invalid_argument);
  EXPECT_THROW(GenerateModifications(data, Scenario::kInstance, 11, 1), std::invalid_argument);
  EXPECT_THROW(GenerateModifications(data, Scenario::kFeature, 6, 1), std::invalid_argument);
  EXPECT_NO_THROW(GenerateModifications(data, Scenario::kSpot, 50, 1));
}

TEST(ColumnRanges, IncludesImplicitZero) {
  const auto data = SparseDataset::FromRows(2, {{{0, 2.0}, {1, 3.0}}, {{1, 5.0}}}, {1, -1});
  const auto r = ColumnRanges(data);
  EXPECT_EQ(r[0], (Interval{0.0, 2.0}));
  EXPECT_EQ(r[1], (Interval{3.0, 5.0}));
}

Baseline SmallBaseline(double lambda) {
  const auto data = NormalizeRows(GenerateSynthetic({150, 30, 0.15, 3}));
  auto [train, test] = SplitTrainTest(data, 0.8, 0);
  return PrepareBaseline(std::move(train), std::move(test), Objective(0.5, lambda), {});
}

TEST(RunTrial, EmptyModificationAtExactOptimum) {
  // One training row in the linear loss piece: w = 1 / lambda and alpha = 1
  // are exact in floating point, so only the rounding floor remains.
  auto train = SparseDataset::FromRows(1, {{{0, 1.0}}}, {1});
  auto test = SparseDataset::FromRows(1, {{{0, 1.0}}, {{0, -2.0}}, {{0, 0.5}}},
                                      {1, -1, 1});
  const Baseline b =
      PrepareBaseline(std::move(train), std::move(test), Objective(0.5, 4.0), {});
  ASSERT_EQ(b.solution.w[0], 0.25);
  ASSERT_EQ(b.solution.residual_gap, 0.0);
  TrialOptions opt;
  opt.timing_repeats = 1;
  const auto r = RunTrial(b, ModificationSet(), Scenario::kSpot, 0, 0, opt);
  EXPECT_EQ(r.gap, b.stats.gap_floor);
  EXPECT_LT(r.drift_upper, 1e-7);
  EXPECT_EQ(r.determination_rate, 1.0);
  EXPECT_EQ(r.contradictions, 0u);
}

TEST(RunTrial, InvariantsAcrossScenarios) {
  for (double lambda : {0.001, 0.01, 0.1, 1.0}) {
    const Baseline b = SmallBaseline(lambda);
    TrialOptions opt;
    opt.timing_repeats = 1;
    for (Scenario s : {Scenario::kSpot, Scenario::kInstance, Scenario::kFeature}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const std::size_t mag = s == Scenario::kSpot ? 20 : 2;
        const auto mods = GenerateModifications(b.train, b.column_ranges, s, mag, seed);
        const auto r = RunTrial(b, mods, s, mag, seed, opt);
        EXPECT_TRUE(r.converged);
        EXPECT_EQ(r.contradictions, 0u);
        EXPECT_GE(r.determination_rate_tightened, r.determination_rate - 1e-12);
        EXPECT_LE(r.drift_upper_tightened, r.drift_upper + 1e-12);
        EXPECT_LE(r.gap_tightened, r.gap + 1e-12);
        EXPECT_GE(r.drift_upper + 1e-9, r.true_drift);
        EXPECT_GE(r.determination_rate, 0.0);
        EXPECT_LE(r.determination_rate, 1.0);
      }
    }
  }
}

TEST(Tables, SingleTrialCsv) {
  TrialResult t;
  t.lambda = 0.1;
  t.determination_rate = 0.5;
  const auto csv = TrialsToCsv({t});
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.rfind("scenario,magnitude,lambda,seed,converged,", 0), 0u);
  EXPECT_EQ(TrialsToCsv({t}, false).find("bound_time"), std::string::npos);
}

TEST(Tables, AggregateMean) {
  TrialResult a, b, c;
  a.determination_rate = 0.5;
  b.determination_rate = 1.0;
  c.determination_rate = 0.0;
  c.converged = false;
  const auto j = nlohmann::json::parse(AggregatesToJson({a, b, c}));
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["trials"], 2);
  EXPECT_EQ(j[0]["excluded"], 1);
  EXPECT_DOUBLE_EQ(j[0]["metrics"]["determination_rate"]["mean"].get<double>(), 0.75);
  EXPECT_DOUBLE_EQ(j[0]["metrics"]["determination_rate"]["min"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j[0]["metrics"]["determination_rate"]["max"].get<double>(), 1.0);
  EXPECT_THROW(EmitTables({}, "unused"), std::invalid_argument);
}

TEST(RunExperiment, ReproducibleTables) {
  ExperimentConfig cfg;
  cfg.data = "synthetic:120,25,0.2,5";
  cfg.lambdas = {0.01, 1.0};
  cfg.scenarios = {Scenario::kSpot, Scenario::kFeature};
  cfg.magnitudes = {1, 10, 100};
  cfg.seeds = {0, 1};
  cfg.timing_repeats = 1;
  const auto a = RunExperiment(cfg);
  const auto b = RunExperiment(cfg);
  // feature magnitude 100 exceeds d and is skipped.
  EXPECT_EQ(a.size(), (3u + 2u) * 2u * 2u);
  EXPECT_EQ(TrialsToCsv(a, false), TrialsToCsv(b, false));
  EXPECT_EQ(AggregatesToJson(a, false), AggregatesToJson(b, false));
  for (const auto& t : a) EXPECT_EQ(t.contradictions, 0u);
}

}  // namespace
}  // namespace deltasvm
