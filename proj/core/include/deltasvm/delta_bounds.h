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

// Bounds on the optimum of a modified problem from the optimum of the
// original one.
//
// After editing a few cells of X, the old pair (w^, a^) is feasible for the
// new problem, and its new duality gap G~ is computable from the cached
// statistics plus the edited cells alone. G~ then confines the new optimum to
// two balls:
//
//   ||a~* - a^||_2 <= sqrt(2 n G~ / gamma)   (gamma^-1-smooth loss)
//   ||w~* - w^||_2 <= sqrt(2 G~ / lambda)    (lambda-strongly convex penalty)
//
// Each ball yields per-coordinate intervals for both w~* and a~* (through
// the optimality conditions w_j = d psi*_j(n^-1 z_j^T a) and
// a_i = -d phi(z_i^T w)). With both properties the two are intersected.

#ifndef DELTASVM_DELTA_BOUNDS_H_
#define DELTASVM_DELTA_BOUNDS_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deltasvm/interval.h"
#include "deltasvm/modification.h"
#include "deltasvm/objectives.h"
#include "deltasvm/solver.h"
#include "deltasvm/sparse_values.h"

namespace deltasvm {

// New-data statistics at the old solution, for touched rows and columns only.
// Parallel arrays, sorted by index.
struct DeltaStats {
  std::vector<std::size_t> rows;     // M_i
  std::vector<double> row_scores;    // z~_i^T w^
  std::vector<double> row_norms;     // ||x~_i||_2
  std::vector<std::size_t> cols;     // M_j
  std::vector<double> col_duals;     // z~_j^T a^
  std::vector<double> col_norms;     // ||x~_j||_2
  std::vector<double> col_neg_sums;
  std::vector<double> col_pos_sums;
  // Cells and cached scalars read while building; at most
  // 2|M| + |M_i| + |M_j|.
  std::size_t touched_entries = 0;

  std::optional<std::size_t> RowSlot(std::size_t i) const;
  std::optional<std::size_t> ColSlot(std::size_t j) const;
  bool empty() const { return rows.empty() && cols.empty(); }
};

// Reads only the edited cells and the cached scalars of their rows/columns.
// Throws std::out_of_range for an edit outside the data.
DeltaStats UpdateDeltaStats(const CachedStats& cached, const OverlayView& view,
                            const PrimalDualSolution& solution);

// G~(w^, a^): loss changes on touched rows, conjugate-penalty changes on
// touched columns, plus the residual gap of the old pair. Clamped below at
// cached.gap_floor.
double ComputeGap(const CachedStats& cached, const DeltaStats& delta,
                  const Objective& obj);

enum class BoundCase {
  kDual,      // from the dual ball (smooth loss)
  kPrimal,    // from the primal ball (strongly convex penalty)
  kCombined,  // intersection of both
};

const char* BoundCaseName(BoundCase c);

// Raised when dual-side and primal-side intervals fail to overlap. Both
// contain the optimum, so this signals a bug or corrupt inputs.
class InconsistentBoundsError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Slack tolerated before two intervals that must overlap are declared
// inconsistent.
inline constexpr double kIntersectionSlack = 1e-9;

// Interval intersection that throws InconsistentBoundsError if the result is
// empty beyond kIntersectionSlack and collapses near-empty results to a
// point.
Interval IntersectChecked(const Interval& a, const Interval& b);

struct BoundsReport {
  BoundCase bound_case = BoundCase::kCombined;
  double gap = 0.0;
  double primal_radius = 0.0;  // sqrt(2 G~ / lambda)
  double dual_radius = 0.0;    // sqrt(2 n G~ / gamma)
  std::vector<Interval> w_bounds;      // length d
  std::vector<Interval> alpha_bounds;  // length n
};

struct CoordinateInterval {
  std::size_t index = 0;
  Interval interval;
};

// Intervals for the coordinates whose centers changed; every other
// coordinate is available in O(1) from BoundEngine.
struct SparseBoundsReport {
  BoundCase bound_case = BoundCase::kCombined;
  double gap = 0.0;
  double primal_radius = 0.0;
  double dual_radius = 0.0;
  std::vector<CoordinateInterval> w_bounds;
  std::vector<CoordinateInterval> alpha_bounds;
};

// Coordinate-wise intersection of a dual-side and a primal-side report.
// Throws InconsistentBoundsError on an empty intersection.
BoundsReport CombineReports(const BoundsReport& dual_side,
                            const BoundsReport& primal_side);

// Replacement centers from a partially re-optimized pair (w', a'). Entries
// override the old solution, the delta and the cache, in that order.
struct CenterOverrides {
  SparseValues w;           // w'_j
  SparseValues alpha;       // a'_i
  SparseValues row_scores;  // z~_i^T w'
  SparseValues col_duals;   // z~_j^T a'
};

// Evaluates the interval of any single coordinate in O(log |M|) from cached
// statistics, the delta and the gap. All references must outlive the engine.
class BoundEngine {
 public:
  BoundEngine(const Objective& obj, const CachedStats& cached,
              const PrimalDualSolution& solution, const DeltaStats& delta,
              double gap, const CenterOverrides* overrides = nullptr);

  double gap() const { return gap_; }
  double primal_radius() const { return primal_radius_; }
  double dual_radius() const { return dual_radius_; }
  std::size_t num_rows() const { return cached_->num_rows(); }
  std::size_t num_cols() const { return cached_->num_cols(); }
  const Objective& objective() const { return *obj_; }

  // Centers and norms on the new data.
  double WeightCenter(std::size_t j) const;
  double DualCenter(std::size_t i) const;
  double RowScore(std::size_t i) const;
  double RowNorm(std::size_t i) const;
  double ColDual(std::size_t j) const;
  double ColNorm(std::size_t j) const;
  // [inf, sup] of n^-1 z~_j^T a over the dual box.
  Interval ColDualRange(std::size_t j) const;

  Interval WeightBound(std::size_t j, BoundCase c = BoundCase::kCombined) const;
  Interval DualBound(std::size_t i, BoundCase c = BoundCase::kCombined) const;
  // Interval for z~_i^T w~* over the primal ball.
  Interval ScoreBound(std::size_t i) const;

  BoundsReport Report(BoundCase c = BoundCase::kCombined) const;
  SparseBoundsReport SparseReport(BoundCase c = BoundCase::kCombined) const;

  // Coordinates whose centers differ from the cached old solution.
  std::vector<std::size_t> TouchedCols() const;
  std::vector<std::size_t> TouchedRows() const;

 private:
  const Objective* obj_;
  const CachedStats* cached_;
  const PrimalDualSolution* solution_;
  const DeltaStats* delta_;
  const CenterOverrides* overrides_;
  double gap_;
  double inv_n_;
  double primal_radius_;
  double dual_radius_;
};

std::string BoundsReportToJson(const BoundsReport& report);
std::string SparseBoundsReportToJson(const SparseBoundsReport& report);
BoundsReport BoundsReportFromJson(const std::string& text);

}  // namespace deltasvm

#endif  // DELTASVM_DELTA_BOUNDS_H_
