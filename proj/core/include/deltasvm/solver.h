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

#ifndef DELTASVM_SOLVER_H_
#define DELTASVM_SOLVER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deltasvm/objectives.h"
#include "deltasvm/sparse_data.h"

namespace deltasvm {

struct PrimalDualSolution {
  std::vector<double> w;      // length d
  std::vector<double> alpha;  // length n, inside [0, 1]
  // P(w) - D(alpha) on the training data, clamped at zero.
  double residual_gap = 0.0;
  // |P(w)| + |D(alpha)|; differences of the objectives are only resolved to
  // a few ulps of this magnitude.
  double objective_scale = 0.0;
  std::size_t epochs = 0;
  bool converged = true;
};

// Per-row and per-column statistics of a solution on its training data.
// Everything the bound engine reads from the old problem lives here; the
// footprint is O(n + d).
struct CachedStats {
  std::vector<double> row_scores;    // z_i^T w
  std::vector<double> row_norms;     // ||x_i||_2
  std::vector<double> col_duals;     // z_j^T alpha (not divided by n)
  std::vector<double> col_norms;     // ||x_j||_2
  std::vector<double> col_neg_sums;  // sum of negative entries of z_j
  std::vector<double> col_pos_sums;  // sum of positive entries of z_j
  double residual_gap = 0.0;
  // Smallest gap the cached pair can certify; see GapFloor.
  double gap_floor = 0.0;

  std::size_t num_rows() const { return row_scores.size(); }
  std::size_t num_cols() const { return col_duals.size(); }
};

// Rounding floor for a duality gap formed from objectives of the given
// magnitude. Gaps below it are not resolvable in double precision.
double GapFloor(double objective_scale);

struct TrainOptions {
  // Stop once P - D <= tolerance * max(1, |P|).
  double tolerance = 1e-9;
  std::size_t max_epochs = 1000;
  // Cyclic order by default; a seeded per-epoch permutation otherwise.
  bool shuffle = false;
  std::uint64_t seed = 0;
};

// n^-1 sum_i phi(z_i^T w) + psi(w). For n = 0 this is psi(w).
double PrimalObjective(const SparseDataset& data, const Objective& obj,
                       std::span<const double> w);

// -n^-1 sum_i phi*(-a_i) - psi*(n^-1 Z^T a); nullopt if some a_i is outside
// the dual box.
std::optional<double> DualObjective(const SparseDataset& data,
                                    const Objective& obj,
                                    std::span<const double> alpha);

// Per-epoch trace, for tests of the ascent invariants.
struct EpochRecord {
  double primal = 0.0;
  double dual = 0.0;
};

// Cyclic dual coordinate ascent with the exact clipped one-coordinate
// maximizer. w is kept equal to (n lambda)^-1 Z^T alpha throughout. A warm
// start supplies the initial alpha; its w is recomputed on `data`.
// Non-convergence within max_epochs is reported through `converged`.
PrimalDualSolution Train(const SparseDataset& data, const Objective& obj,
                         const TrainOptions& options = {},
                         const PrimalDualSolution* warm_start = nullptr,
                         std::vector<EpochRecord>* trace = nullptr);

CachedStats BuildCachedStats(const SparseDataset& data,
                             const PrimalDualSolution& solution);

// Versioned JSON carrying the solution and its cached statistics.
std::string SolutionToJson(const PrimalDualSolution& solution,
                           const CachedStats& stats);
void SolutionFromJson(const std::string& text, PrimalDualSolution& solution,
                      CachedStats& stats);

}  // namespace deltasvm

#endif  // DELTASVM_SOLVER_H_
