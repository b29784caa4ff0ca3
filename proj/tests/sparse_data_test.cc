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

#include "deltasvm/sparse_data.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "deltasvm/modification.h"
#include "oracles/oracles.h"

namespace deltasvm {
namespace {

TEST(ParseLibsvm, TwoRows) {
  const auto data = ParseLibsvmString("+1 1:0.5 3:0.5\n-1 2:1.0");
  ASSERT_EQ(data.num_rows(), 2u);
  EXPECT_EQ(data.num_cols(), 3u);
  ASSERT_EQ(data.row(0).size(), 2u);
  EXPECT_EQ(data.row(0)[0], (Entry{0, 0.5}));
  EXPECT_EQ(data.row(0)[1], (Entry{2, 0.5}));
  EXPECT_EQ(data.label(0), 1);
  EXPECT_EQ(data.label(1), -1);
  EXPECT_EQ(data.value(1, 1), 1.0);
}

TEST(ParseLibsvm, EmptyInput) {
  const auto data = ParseLibsvmString("");
  EXPECT_EQ(data.num_rows(), 0u);
  EXPECT_EQ(data.num_cols(), 0u);
}

TEST(ParseLibsvm, NonIncreasingIndexFails) {
  EXPECT_THROW(ParseLibsvmString("1 2:0 1:3"), ParseError);
}

TEST(ParseLibsvm, DuplicateIndexFails) {
  EXPECT_THROW(ParseLibsvmString("1 2:1 2:3"), ParseError);
}

TEST(ParseLibsvm, MalformedReportsLine) {
  try {
    ParseLibsvmString("1 1:1\n-1 x:2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(ParseLibsvmString("1 0:1"), ParseError);
  EXPECT_THROW(ParseLibsvmString("1 1:abc"), ParseError);
}

TEST(ParseLibsvm, LabelsMapToSign) {
  const auto data = ParseLibsvmString("2 1:1\n0 1:1\n-3 1:1\n");
  EXPECT_EQ(data.label(0), 1);
  EXPECT_EQ(data.label(1), -1);
  EXPECT_EQ(data.label(2), -1);
}

TEST(ParseLibsvm, RoundTrip) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto data = oracle::RandomDataset(15, 12, 0.3, rng, false);
    const auto back = ParseLibsvmString(ToLibsvmString(data));
    // Trailing all-zero columns are not representable in the text format.
    ASSERT_EQ(back.num_rows(), data.num_rows());
    for (std::size_t i = 0; i < data.num_rows(); ++i) {
      ASSERT_EQ(back.label(i), data.label(i));
      ASSERT_TRUE(std::equal(back.row(i).begin(), back.row(i).end(),
                             data.row(i).begin(), data.row(i).end()));
    }
  }
}

TEST(SparseDataset, RowAndColumnViewsAgree) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto data = oracle::RandomDataset(20, 15, 0.25, rng, false);
    std::set<std::tuple<std::size_t, std::size_t, double>> from_rows, from_cols;
    for (std::size_t i = 0; i < data.num_rows(); ++i) {
      for (const Entry& e : data.row(i)) from_rows.insert({i, e.index, e.value});
    }
    for (std::size_t j = 0; j < data.num_cols(); ++j) {
      std::size_t prev = 0;
      bool first = true;
      for (const Entry& e : data.col(j)) {
        if (!first) EXPECT_LT(prev, e.index);
        prev = e.index;
        first = false;
        EXPECT_NE(e.value, 0.0);
        from_cols.insert({e.index, j, e.value});
      }
    }
    EXPECT_EQ(from_rows, from_cols);
    EXPECT_EQ(from_rows.size(), data.nnz());
  }
}

TEST(SparseDataset, FromRowsValidates) {
  EXPECT_THROW(SparseDataset::FromRows(2, {{{0, 1.0}, {0, 2.0}}}, {1}),
               std::invalid_argument);
  EXPECT_THROW(SparseDataset::FromRows(2, {{{2, 1.0}}}, {1}),
               std::invalid_argument);
  EXPECT_THROW(SparseDataset::FromRows(2, {{{0, 1.0}}}, {0}),
               std::invalid_argument);
  const auto data = SparseDataset::FromRows(2, {{{0, 0.0}, {1, 2.0}}}, {1});
  EXPECT_EQ(data.nnz(), 1u);
}

TEST(NormalizeRows, ThreeFourFive) {
  const auto data = SparseDataset::FromRows(2, {{{0, 3.0}, {1, 4.0}}, {}}, {1, -1});
  const auto out = NormalizeRows(data);
  EXPECT_DOUBLE_EQ(out.value(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(out.value(0, 1), 0.8);
  EXPECT_EQ(out.row(1).size(), 0u);
}

TEST(NormalizeRows, UnitNorm) {
  std::mt19937_64 rng(11);
  const auto data = oracle::RandomDataset(100, 30, 0.3, rng, false);
  const auto out = NormalizeRows(data);
  for (std::size_t i = 0; i < out.num_rows(); ++i) {
    if (out.row(i).empty()) continue;
    double s = 0.0;
    for (const Entry& e : out.row(i)) s += e.value * e.value;
    EXPECT_NEAR(std::sqrt(s), 1.0, 1e-12);
  }
}

TEST(SplitTrainTest, SizesDeterminismAndPartition) {
  std::vector<std::vector<Entry>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < 10; ++i) {
    rows.push_back({{0, static_cast<double>(i + 1)}});
    labels.push_back(i % 2 ? 1 : -1);
  }
  const auto data = SparseDataset::FromRows(1, rows, labels);
  const auto [a, b] = SplitTrainTest(data, 0.8, 42);
  EXPECT_EQ(a.num_rows(), 8u);
  EXPECT_EQ(b.num_rows(), 2u);
  EXPECT_EQ(a.num_cols(), 1u);
  EXPECT_EQ(b.num_cols(), 1u);
  const auto [a2, b2] = SplitTrainTest(data, 0.8, 42);
  EXPECT_EQ(a, a2);
  EXPECT_EQ(b, b2);
  std::multiset<double> seen;
  for (std::size_t i = 0; i < a.num_rows(); ++i) seen.insert(a.value(i, 0));
  for (std::size_t i = 0; i < b.num_rows(); ++i) seen.insert(b.value(i, 0));
  std::multiset<double> all;
  for (std::size_t i = 0; i < 10; ++i) all.insert(i + 1.0);
  EXPECT_EQ(seen, all);
}

TEST(SplitTrainTest, EmptyAndBadFraction) {
  const auto [a, b] = SplitTrainTest(SparseDataset(), 0.8, 1);
  EXPECT_EQ(a.num_rows(), 0u);
  EXPECT_EQ(b.num_rows(), 0u);
  const auto data = ParseLibsvmString("1 1:1\n");
  EXPECT_THROW(SplitTrainTest(data, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(SplitTrainTest(data, 1.0, 1), std::invalid_argument);
}

TEST(ModificationSet, LaterEditWinsAndShadows) {
  const ModificationSet mods({{1, 2, 5.0}, {0, 1, 1.0}, {1, 2, 7.0}, {3, 1, 0.0}});
  EXPECT_EQ(mods.size(), 3u);
  EXPECT_EQ(*mods.Find(1, 2), 7.0);
  EXPECT_FALSE(mods.Find(2, 2).has_value());
  EXPECT_EQ(std::vector<std::size_t>(mods.touched_rows().begin(),
                                     mods.touched_rows().end()),
            (std::vector<std::size_t>{0, 1, 3}));
  EXPECT_EQ(std::vector<std::size_t>(mods.touched_cols().begin(),
                                     mods.touched_cols().end()),
            (std::vector<std::size_t>{1, 2}));
  const auto col1 = mods.ColEdits(1);
  ASSERT_EQ(col1.size(), 2u);
  EXPECT_EQ(col1[0].row, 0u);
  EXPECT_EQ(col1[1].row, 3u);
}

TEST(ModificationSet, JsonRoundTrip) {
  const ModificationSet mods({{1, 2, 0.25}, {0, 0, -1.5}});
  const auto back = ModificationsFromJson(ModificationsToJson(mods));
  EXPECT_TRUE(std::equal(mods.edits().begin(), mods.edits().end(),
                         back.edits().begin(), back.edits().end()));
}

TEST(ApplyModifications, EmptyIsIdentity) {
  std::mt19937_64 rng(5);
  const auto data = oracle::RandomDataset(10, 8, 0.3, rng);
  EXPECT_EQ(ApplyModifications(data, ModificationSet()), data);
}

TEST(ApplyModifications, ZeroEditDropsNonzero) {
  const auto data = SparseDataset::FromRows(2, {{{0, 2.0}, {1, 1.0}}}, {1});
  const auto out = ApplyModifications(data, ModificationSet({{0, 0, 0.0}}));
  EXPECT_EQ(out.nnz(), 1u);
  EXPECT_EQ(out.value(0, 0), 0.0);
  EXPECT_EQ(out.col(0).size(), 0u);
}

TEST(ApplyModifications, OutOfRangeFails) {
  const auto data = SparseDataset::FromRows(2, {{{0, 2.0}}}, {1});
  EXPECT_THROW(ApplyModifications(data, ModificationSet({{1, 0, 1.0}})),
               std::out_of_range);
  EXPECT_THROW(ApplyModifications(data, ModificationSet({{0, 2, 1.0}})),
               std::out_of_range);
}

TEST(ApplyModifications, MatchesDenseOracleAndOverlay) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 50, d = 1 + rng() % 50;
    const auto data = oracle::RandomDataset(n, d, 0.2, rng, false);
    const auto edits = oracle::RandomEdits(n, d, 1 + rng() % 40, rng);
    const ModificationSet mods(edits);
    const auto out = ApplyModifications(data, mods);
    const auto dense = oracle::ApplyDense(oracle::ToDense(data), edits);
    const OverlayView view(data, mods);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        ASSERT_EQ(out.value(i, j), dense[i][j]);
        ASSERT_EQ(view.value(i, j), dense[i][j]);
      }
    }
    for (std::size_t i : mods.touched_rows()) {
      std::vector<Entry> merged;
      view.ForEachInRow(i, [&](std::size_t j, double v) { merged.push_back({j, v}); });
      ASSERT_TRUE(std::equal(merged.begin(), merged.end(), out.row(i).begin(),
                             out.row(i).end()));
    }
    for (std::size_t j : mods.touched_cols()) {
      std::vector<Entry> merged;
      view.ForEachInCol(j, [&](std::size_t i, double v) { merged.push_back({i, v}); });
      ASSERT_TRUE(std::equal(merged.begin(), merged.end(), out.col(j).begin(),
                             out.col(j).end()));
    }
  }
}

}  // namespace
}  // namespace deltasvm
