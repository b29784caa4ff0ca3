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

// Partial re-optimization on the modified data. Optimizing a subset J of
// primal coordinates (all others frozen at w^) can only lower P~, and a
// subset I of dual coordinates can only raise D~; either way the gap and
// therefore every ball radius shrinks. The work is proportional to the
// nonzeros of the selected columns/rows.

#ifndef DELTASVM_PARTIAL_OPT_H_
#define DELTASVM_PARTIAL_OPT_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "deltasvm/delta_bounds.h"
#include "deltasvm/modification.h"
#include "deltasvm/objectives.h"
#include "deltasvm/solver.h"

namespace deltasvm {

enum class Scenario { kSpot, kInstance, kFeature };

const char* ScenarioName(Scenario s);
// Throws std::invalid_argument for anything but spot/instance/feature.
Scenario ScenarioFromName(const std::string& name);

struct PartialBudget {
  std::size_t max_passes = 20;
  // A sweep that improves the objective by less than this ends the loop.
  double progress_tol = 1e-10;
};

struct PartialPlan {
  Scenario scenario = Scenario::kSpot;
  std::vector<std::size_t> primal_coords;  // J
  std::vector<std::size_t> dual_coords;    // I
  PartialBudget budget;
};

// spot: J = M_j, I = M_i; instance: I = M_i only; feature: J = M_j only.
PartialPlan MakePartialPlan(Scenario scenario, const ModificationSet& mods,
                            const PartialBudget& budget = {});

// {"scenario": str, "max_passes": int, "progress_tol": float}
std::string PartialPlanToJson(const PartialPlan& plan);
// Coordinate sets are rebuilt from `mods`.
PartialPlan PartialPlanFromJson(const std::string& text,
                                const ModificationSet& mods);

struct CheckSolution {
  // w' on J, a' on I, and the row scores / column dual dots they change.
  CenterOverrides centers;
  double primal_delta = 0.0;  // P~(w') - P~(w^), <= 0
  double dual_delta = 0.0;    // D~(a') - D~(a^), >= 0
  std::size_t primal_passes = 0;
  std::size_t dual_passes = 0;
  // Objective change of each sweep, in order.
  std::vector<double> primal_sweeps;
  std::vector<double> dual_sweeps;

  double improvement() const { return dual_delta - primal_delta; }

  std::vector<double> PrimalVector(const PrimalDualSolution& old) const;
  std::vector<double> DualVector(const PrimalDualSolution& old) const;
};

// Cyclic exact coordinate descent on P~ over J. Each step minimizes the
// piecewise-quadratic restriction exactly by walking its breakpoints.
// Throws std::invalid_argument if J is empty.
CheckSolution PartialPrimalOptimize(const OverlayView& view,
                                    const Objective& obj,
                                    const PrimalDualSolution& solution,
                                    const CachedStats& cached,
                                    const DeltaStats& delta,
                                    std::span<const std::size_t> coords,
                                    const PartialBudget& budget = {});

// Cyclic clipped closed-form coordinate ascent on D~ over I.
// Throws std::invalid_argument if I is empty.
CheckSolution PartialDualOptimize(const OverlayView& view, const Objective& obj,
                                  const PrimalDualSolution& solution,
                                  const CachedStats& cached,
                                  const DeltaStats& delta,
                                  std::span<const std::size_t> coords,
                                  const PartialBudget& budget = {});

// Runs the primal half (if J is nonempty) and then the dual half (if I is
// nonempty), each against the frozen old counterpart, and merges them.
CheckSolution RunPartialPlan(const PartialPlan& plan, const OverlayView& view,
                             const Objective& obj,
                             const PrimalDualSolution& solution,
                             const CachedStats& cached,
                             const DeltaStats& delta);

// G~(w', a') = G~(w^, a^) + primal_delta - dual_delta, clamped below at
// `floor` (the rounding floor of the cached pair, CachedStats::gap_floor).
// Throws InconsistentBoundsError if that exceeds `gap` by more than 1e-12.
double TightenedGap(double gap, const CheckSolution& check, double floor = 0.0);

// Re-evaluates the bounds at the check pair and intersects them with
// `original`, which was computed at the old pair from the same delta.
BoundsReport TightenedBounds(const BoundsReport& original,
                             const CheckSolution& check, const Objective& obj,
                             const CachedStats& cached,
                             const PrimalDualSolution& solution,
                             const DeltaStats& delta);

// Minimizer over t of n^-1 sum_k phi(s_k + z_k (t - w0)) + lambda t^2 / 2,
// for the (score, signed value) pairs of one column. Exposed for tests.
double MinimizeCoordinate(std::span<const double> scores,
                          std::span<const double> values, double w0,
                          const Objective& obj, std::size_t n);

}  // namespace deltasvm

#endif  // DELTASVM_PARTIAL_OPT_H_
