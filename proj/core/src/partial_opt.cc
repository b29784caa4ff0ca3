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

#include "deltasvm/partial_opt.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace deltasvm {

const char* ScenarioName(Scenario s) {
  switch (s) {
    case Scenario::kSpot:
      return "spot";
    case Scenario::kInstance:
      return "instance";
    case Scenario::kFeature:
      return "feature";
  }
  return "unknown";
}

Scenario ScenarioFromName(const std::string& name) {
  if (name == "spot") return Scenario::kSpot;
  if (name == "instance") return Scenario::kInstance;
  if (name == "feature") return Scenario::kFeature;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

PartialPlan MakePartialPlan(Scenario scenario, const ModificationSet& mods,
                            const PartialBudget& budget) {
  PartialPlan plan;
  plan.scenario = scenario;
  plan.budget = budget;
  const auto rows = mods.touched_rows();
  const auto cols = mods.touched_cols();
  if (scenario != Scenario::kInstance) plan.primal_coords.assign(cols.begin(), cols.end());
  if (scenario != Scenario::kFeature) plan.dual_coords.assign(rows.begin(), rows.end());
  return plan;
}

std::string PartialPlanToJson(const PartialPlan& plan) {
  nlohmann::json j = {{"scenario", ScenarioName(plan.scenario)},
                      {"max_passes", plan.budget.max_passes},
                      {"progress_tol", plan.budget.progress_tol}};
  return j.dump();
}

PartialPlan PartialPlanFromJson(const std::string& text,
                                const ModificationSet& mods) {
  const auto j = nlohmann::json::parse(text);
  PartialBudget budget;
  budget.max_passes = j.at("max_passes").get<std::size_t>();
  budget.progress_tol = j.at("progress_tol").get<double>();
  return MakePartialPlan(ScenarioFromName(j.at("scenario").get<std::string>()),
                         mods, budget);
}

std::vector<double> CheckSolution::PrimalVector(
    const PrimalDualSolution& old) const {
  std::vector<double> w = old.w;
  for (const auto& [j, v] : centers.w) w[j] = v;
  return w;
}

std::vector<double> CheckSolution::DualVector(
    const PrimalDualSolution& old) const {
  std::vector<double> a = old.alpha;
  for (const auto& [i, v] : centers.alpha) a[i] = v;
  return a;
}

double MinimizeCoordinate(std::span<const double> scores,
                          std::span<const double> values, double w0,
                          const Objective& obj, std::size_t n) {
  const double gamma = obj.gamma();
  const double lambda = obj.lambda();
  const double inv_n = n ? 1.0 / static_cast<double>(n) : 0.0;

  // In the step d, row k crosses a knot where s + z d equals 1 or 1 - gamma.
  std::vector<double> knots;
  knots.reserve(2 * scores.size());
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const double z = values[k];
    if (z == 0.0) continue;
    knots.push_back((1.0 - scores[k]) / z);
    knots.push_back((1.0 - gamma - scores[k]) / z);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  auto slope = [&](double d) {
    double g = lambda * (w0 + d);
    for (std::size_t k = 0; k < scores.size(); ++k) {
      g += inv_n * values[k] * obj.loss.Derivative(scores[k] + values[k] * d);
    }
    return g;
  };

  // First knot with a nonnegative slope; the minimizer lies just left of it.
  std::size_t lo = 0, hi = knots.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (slope(knots[mid]) >= 0.0) hi = mid;
    else lo = mid + 1;
  }
  const double inf = std::numeric_limits<double>::infinity();
  const double left = lo > 0 ? knots[lo - 1] : -inf;
  const double right = lo < knots.size() ? knots[lo] : inf;
  if (right != inf && slope(right) == 0.0) return w0 + right;

  double probe = 0.0;
  if (left != -inf && right != inf) probe = 0.5 * (left + right);
  else if (left != -inf) probe = left + 1.0;
  else if (right != inf) probe = right - 1.0;

  // On the open segment the slope is affine: a + b d.
  double a = lambda * w0, b = lambda;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const double s = scores[k], z = values[k];
    const double u = s + z * probe;
    if (u > 1.0) continue;
    if (u < 1.0 - gamma) {
      a -= inv_n * z;
    } else {
      a -= inv_n * z * (1.0 - s) / gamma;
      b += inv_n * z * z / gamma;
    }
  }
  const double d = std::clamp(-a / b, left, right);
  return w0 + d;
}

namespace {

// Lazily materialized new-data score z~_i^T w for the rows reached by J.
class ScoreTable {
 public:
  ScoreTable(const CachedStats& cached, const DeltaStats& delta)
      : cached_(cached), delta_(delta) {}

  double& at(std::size_t i) {
    auto [it, inserted] = values_.try_emplace(i, 0.0);
    if (inserted) {
      auto k = delta_.RowSlot(i);
      it->second = k ? delta_.row_scores[*k] : cached_.row_scores[i];
    }
    return it->second;
  }
  const std::unordered_map<std::size_t, double>& values() const {
    return values_;
  }

 private:
  const CachedStats& cached_;
  const DeltaStats& delta_;
  std::unordered_map<std::size_t, double> values_;
};

// Lazily materialized new-data column dot z~_j^T a for the columns reached
// by I.
class ColDualTable {
 public:
  ColDualTable(const CachedStats& cached, const DeltaStats& delta)
      : cached_(cached), delta_(delta) {}

  double& at(std::size_t j) {
    auto [it, inserted] = values_.try_emplace(j, 0.0);
    if (inserted) {
      auto k = delta_.ColSlot(j);
      it->second = k ? delta_.col_duals[*k] : cached_.col_duals[j];
    }
    return it->second;
  }
  const std::unordered_map<std::size_t, double>& values() const {
    return values_;
  }

 private:
  const CachedStats& cached_;
  const DeltaStats& delta_;
  std::unordered_map<std::size_t, double> values_;
};

}  // namespace

CheckSolution PartialPrimalOptimize(const OverlayView& view,
                                    const Objective& obj,
                                    const PrimalDualSolution& solution,
                                    const CachedStats& cached,
                                    const DeltaStats& delta,
                                    std::span<const std::size_t> coords,
                                    const PartialBudget& budget) {
  if (coords.empty()) {
    throw std::invalid_argument("partial primal optimization needs a nonempty J");
  }
  const std::size_t n = view.num_rows();
  const double inv_n = n ? 1.0 / static_cast<double>(n) : 0.0;
  const double lambda = obj.lambda();

  CheckSolution check;
  ScoreTable scores(cached, delta);
  std::unordered_map<std::size_t, double> w;
  for (std::size_t j : coords) w.emplace(j, solution.w[j]);

  std::vector<std::size_t> rows;
  std::vector<double> z, s;
  for (std::size_t pass = 0; pass < budget.max_passes; ++pass) {
    double sweep = 0.0;
    for (std::size_t j : coords) {
      rows.clear();
      z.clear();
      s.clear();
      view.ForEachInCol(j, [&](std::size_t i, double x) {
        rows.push_back(i);
        z.push_back(view.label(i) * x);
        s.push_back(scores.at(i));
      });
      double& wj = w.at(j);
      const double next = MinimizeCoordinate(s, z, wj, obj, n);
      const double step = next - wj;
      if (step == 0.0) continue;
      double change = 0.5 * lambda * (next * next - wj * wj);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        change += inv_n * (obj.loss.Eval(s[k] + z[k] * step) -
                           obj.loss.Eval(s[k]));
      }
      // Reject steps that rounding turned into non-improvements.
      if (!(change < 0.0)) continue;
      wj = next;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        scores.at(rows[k]) = s[k] + z[k] * step;
      }
      sweep += change;
    }
    check.primal_delta += sweep;
    check.primal_sweeps.push_back(sweep);
    ++check.primal_passes;
    if (-sweep < budget.progress_tol) break;
  }

  check.centers.w = SparseValues::FromMap(w);
  check.centers.row_scores = SparseValues::FromMap(scores.values());
  return check;
}

CheckSolution PartialDualOptimize(const OverlayView& view, const Objective& obj,
                                  const PrimalDualSolution& solution,
                                  const CachedStats& cached,
                                  const DeltaStats& delta,
                                  std::span<const std::size_t> coords,
                                  const PartialBudget& budget) {
  if (coords.empty()) {
    throw std::invalid_argument("partial dual optimization needs a nonempty I");
  }
  const std::size_t n = view.num_rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double scale = inv_n / obj.lambda();
  const double gamma = obj.gamma();

  CheckSolution check;
  ColDualTable duals(cached, delta);
  std::unordered_map<std::size_t, double> alpha;
  for (std::size_t i : coords) alpha.emplace(i, solution.alpha[i]);

  std::vector<std::size_t> cols;
  std::vector<double> x;
  for (std::size_t pass = 0; pass < budget.max_passes; ++pass) {
    double sweep = 0.0;
    for (std::size_t i : coords) {
      cols.clear();
      x.clear();
      const double y = view.label(i);
      double dot = 0.0, sq = 0.0;
      view.ForEachInRow(i, [&](std::size_t j, double v) {
        cols.push_back(j);
        x.push_back(v);
        dot += v * duals.at(j);
        sq += v * v;
      });
      const double score = y * dot * scale;  // z~_i^T w(a)
      double& ai = alpha.at(i);
      const double curvature = gamma + sq * scale;
      const double grad = 1.0 - score - gamma * ai;
      const double next = std::clamp(ai + grad / curvature, 0.0, 1.0);
      const double step = next - ai;
      if (step == 0.0) continue;
      const double gain = inv_n * (grad * step - 0.5 * curvature * step * step);
      if (!(gain > 0.0)) continue;
      ai = next;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        duals.at(cols[k]) += step * y * x[k];
      }
      sweep += gain;
    }
    check.dual_delta += sweep;
    check.dual_sweeps.push_back(sweep);
    ++check.dual_passes;
    if (sweep < budget.progress_tol) break;
  }

  check.centers.alpha = SparseValues::FromMap(alpha);
  check.centers.col_duals = SparseValues::FromMap(duals.values());
  return check;
}

CheckSolution RunPartialPlan(const PartialPlan& plan, const OverlayView& view,
                             const Objective& obj,
                             const PrimalDualSolution& solution,
                             const CachedStats& cached,
                             const DeltaStats& delta) {
  CheckSolution out;
  if (!plan.primal_coords.empty()) {
    out = PartialPrimalOptimize(view, obj, solution, cached, delta,
                                plan.primal_coords, plan.budget);
  }
  if (!plan.dual_coords.empty()) {
    CheckSolution dual = PartialDualOptimize(view, obj, solution, cached, delta,
                                             plan.dual_coords, plan.budget);
    out.centers.alpha = std::move(dual.centers.alpha);
    out.centers.col_duals = std::move(dual.centers.col_duals);
    out.dual_delta = dual.dual_delta;
    out.dual_passes = dual.dual_passes;
    out.dual_sweeps = std::move(dual.dual_sweeps);
  }
  return out;
}

double TightenedGap(double gap, const CheckSolution& check, double floor) {
  const double next = gap + check.primal_delta - check.dual_delta;
  if (next > gap + 1e-12) {
    throw InconsistentBoundsError("partial optimization increased the gap");
  }
  return std::max(floor, next);
}

BoundsReport TightenedBounds(const BoundsReport& original,
                             const CheckSolution& check, const Objective& obj,
                             const CachedStats& cached,
                             const PrimalDualSolution& solution,
                             const DeltaStats& delta) {
  const double gap = TightenedGap(original.gap, check, cached.gap_floor);
  BoundEngine engine(obj, cached, solution, delta, gap, &check.centers);
  BoundsReport out = engine.Report(original.bound_case);
  if (out.w_bounds.size() != original.w_bounds.size() ||
      out.alpha_bounds.size() != original.alpha_bounds.size()) {
    throw std::invalid_argument("original report has the wrong dimensions");
  }
  // Both reports contain the optimum; the balls move with their centers, so
  // the re-evaluated intervals alone need not nest inside the old ones.
  for (std::size_t j = 0; j < out.w_bounds.size(); ++j) {
    out.w_bounds[j] = IntersectChecked(out.w_bounds[j], original.w_bounds[j]);
  }
  for (std::size_t i = 0; i < out.alpha_bounds.size(); ++i) {
    out.alpha_bounds[i] =
        IntersectChecked(out.alpha_bounds[i], original.alpha_bounds[i]);
  }
  return out;
}

}  // namespace deltasvm
