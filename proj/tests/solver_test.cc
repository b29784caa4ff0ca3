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

#include "deltasvm/solver.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.h"

namespace deltasvm {
namespace {

std::vector<int> Labels(const SparseDataset& data) {
  return {data.labels().begin(), data.labels().end()};
}

TEST(PrimalObjective, ZeroWeights) {
  std::mt19937_64 rng(1);
  const auto data = oracle::RandomDataset(10, 5, 0.5, rng);
  const Objective obj(0.5, 0.1);
  EXPECT_DOUBLE_EQ(PrimalObjective(data, obj, std::vector<double>(5, 0.0)), 0.75);
}

TEST(PrimalObjective, EmptyDatasetIsPenalty) {
  const auto data = SparseDataset::FromRows(2, {}, {});
  const Objective obj(0.5, 2.0);
  EXPECT_DOUBLE_EQ(PrimalObjective(data, obj, std::vector<double>{1.0, 2.0}), 5.0);
}

TEST(DualObjective, ZeroAndInfeasible) {
  std::mt19937_64 rng(2);
  const auto data = oracle::RandomDataset(4, 3, 0.5, rng);
  const Objective obj(0.5, 0.1);
  EXPECT_EQ(*DualObjective(data, obj, std::vector<double>(4, 0.0)), 0.0);
  EXPECT_FALSE(DualObjective(data, obj, std::vector<double>{0.0, 1.5, 0.0, 0.0}));
  EXPECT_FALSE(DualObjective(data, obj, std::vector<double>{-0.1, 0.0, 0.0, 0.0}));
}

TEST(Objectives, MatchDenseOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 50, d = 1 + rng() % 50;
    const auto data = oracle::RandomDataset(n, d, 0.3, rng);
    const Objective obj(0.5, 0.05);
    std::vector<double> w(d), alpha(n);
    for (auto& v : w) v = u(rng);
    for (auto& v : alpha) v = a(rng);
    const auto dense = oracle::ToDense(data);
    EXPECT_NEAR(PrimalObjective(data, obj, w),
                oracle::DensePrimal(dense, Labels(data), w, 0.5, 0.05), 1e-10);
    EXPECT_NEAR(*DualObjective(data, obj, alpha),
                oracle::DenseDual(dense, Labels(data), alpha, d, 0.5, 0.05), 1e-10);
  }
}

TEST(Train, SeparablePair) {
  const auto data =
      SparseDataset::FromRows(2, {{{0, 1.0}}, {{0, -1.0}}}, {1, -1});
  const Objective obj(0.5, 0.01);
  const auto sol = Train(data, obj);
  ASSERT_TRUE(sol.converged);
  EXPECT_LE(sol.residual_gap, 1e-9);
  EXPECT_GT(sol.w[0], 0.0);
  EXPECT_GT(data.label(1) * -1.0 * sol.w[0], 0.0);
}

TEST(Train, DeterministicAndSelfConsistent) {
  std::mt19937_64 rng(4);
  const auto data = oracle::RandomDataset(80, 20, 0.2, rng);
  const Objective obj(0.5, 0.01);
  TrainOptions opt;
  opt.shuffle = true;
  opt.seed = 9;
  const auto a = Train(data, obj, opt);
  const auto b = Train(data, obj, opt);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.alpha, b.alpha);
  const double gap = PrimalObjective(data, obj, a.w) - *DualObjective(data, obj, a.alpha);
  EXPECT_NEAR(a.residual_gap, std::max(0.0, gap), 1e-12);
  EXPECT_LE(a.residual_gap, 1e-9 * std::max(1.0, PrimalObjective(data, obj, a.w)));
}

TEST(Train, AscentInvariants) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto data = oracle::RandomDataset(60, 15, 0.3, rng);
    const Objective obj(0.5, 0.001 * std::pow(10.0, t % 4));
    std::vector<EpochRecord> trace;
    const auto sol = Train(data, obj, {}, nullptr, &trace);
    for (std::size_t k = 0; k < trace.size(); ++k) {
      EXPECT_LE(trace[k].dual, trace[k].primal + 1e-12);
      if (k > 0) EXPECT_GE(trace[k].dual, trace[k - 1].dual - 1e-12);
    }
    for (double a : sol.alpha) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
    // KKT linkage w = (n lambda)^-1 Z^T alpha.
    const double scale = 1.0 / (data.num_rows() * obj.lambda());
    for (std::size_t j = 0; j < data.num_cols(); ++j) {
      double s = 0.0;
      for (const Entry& e : data.col(j)) s += data.label(e.index) * e.value * sol.alpha[e.index];
      EXPECT_NEAR(sol.w[j], scale * s, 1e-12);
    }
  }
}

TEST(Train, NonConvergenceIsFlagged) {
  std::mt19937_64 rng(6);
  const auto data = oracle::RandomDataset(60, 15, 0.3, rng);
  TrainOptions opt;
  opt.max_epochs = 1;
  opt.tolerance = 1e-15;
  const auto sol = Train(data, Objective(0.5, 0.001), opt);
  EXPECT_FALSE(sol.converged);
}

TEST(Train, WarmStartConverges) {
  std::mt19937_64 rng(7);
  const auto data = oracle::RandomDataset(60, 15, 0.3, rng);
  const Objective obj(0.5, 0.01);
  const auto cold = Train(data, obj);
  const auto warm = Train(data, obj, {}, &cold);
  EXPECT_TRUE(warm.converged);
  EXPECT_LE(warm.epochs, 1u);
}

TEST(BuildCachedStats, ZeroSolutionAndNorms) {
  std::mt19937_64 rng(8);
  const auto data = oracle::RandomDataset(30, 10, 0.4, rng);
  PrimalDualSolution zero;
  zero.w.assign(10, 0.0);
  zero.alpha.assign(30, 0.0);
  const auto stats = BuildCachedStats(data, zero);
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_EQ(stats.row_scores[i], 0.0);
    if (!data.row(i).empty()) EXPECT_NEAR(stats.row_norms[i], 1.0, 1e-12);
  }
  for (double v : stats.col_duals) EXPECT_EQ(v, 0.0);
}

TEST(BuildCachedStats, MatchesDenseOracle) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + rng() % 40, d = 1 + rng() % 40;
    const auto data = oracle::RandomDataset(n, d, 0.3, rng);
    const auto sol = Train(data, Objective(0.5, 0.1));
    const auto stats = BuildCachedStats(data, sol);
    const auto x = oracle::ToDense(data);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0, q = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        s += data.label(i) * x[i][j] * sol.w[j];
        q += x[i][j] * x[i][j];
      }
      EXPECT_NEAR(stats.row_scores[i], s, 1e-12);
      EXPECT_NEAR(stats.row_norms[i], std::sqrt(q), 1e-12);
    }
    for (std::size_t j = 0; j < d; ++j) {
      double dot = 0.0, q = 0.0, neg = 0.0, pos = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double z = data.label(i) * x[i][j];
        dot += z * sol.alpha[i];
        q += z * z;
        (z < 0 ? neg : pos) += z;
      }
      EXPECT_NEAR(stats.col_duals[j], dot, 1e-12);
      EXPECT_NEAR(stats.col_norms[j], std::sqrt(q), 1e-12);
      EXPECT_NEAR(stats.col_neg_sums[j], neg, 1e-12);
      EXPECT_NEAR(stats.col_pos_sums[j], pos, 1e-12);
    }
    EXPECT_EQ(stats.residual_gap, sol.residual_gap);
  }
}

TEST(SolutionJson, RoundTrip) {
  std::mt19937_64 rng(10);
  const auto data = oracle::RandomDataset(20, 8, 0.4, rng);
  const auto sol = Train(data, Objective(0.5, 0.1));
  const auto stats = BuildCachedStats(data, sol);
  PrimalDualSolution sol2;
  CachedStats stats2;
  SolutionFromJson(SolutionToJson(sol, stats), sol2, stats2);
  EXPECT_EQ(sol2.w, sol.w);
  EXPECT_EQ(sol2.alpha, sol.alpha);
  EXPECT_EQ(sol2.residual_gap, sol.residual_gap);
  EXPECT_EQ(stats2.row_scores, stats.row_scores);
  EXPECT_EQ(stats2.col_pos_sums, stats.col_pos_sums);
  EXPECT_THROW(SolutionFromJson(R"({"version":2})", sol2, stats2), std::exception);
}

}  // namespace
}  // namespace deltasvm
