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

#include "deltasvm/delta_bounds.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace deltasvm {
namespace {

std::optional<std::size_t> Slot(const std::vector<std::size_t>& keys,
                                std::size_t key) {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - keys.begin());
}

void RemoveSigned(double z, double& neg, double& pos) {
  if (z < 0.0) neg -= z;
  else if (z > 0.0) pos -= z;
}

void AddSigned(double z, double& neg, double& pos) {
  if (z < 0.0) neg += z;
  else if (z > 0.0) pos += z;
}

}  // namespace

std::optional<std::size_t> DeltaStats::RowSlot(std::size_t i) const {
  return Slot(rows, i);
}

std::optional<std::size_t> DeltaStats::ColSlot(std::size_t j) const {
  return Slot(cols, j);
}

DeltaStats UpdateDeltaStats(const CachedStats& cached, const OverlayView& view,
                            const PrimalDualSolution& solution) {
  const SparseDataset& base = view.base();
  const ModificationSet& mods = view.delta();
  mods.CheckBounds(base.num_rows(), base.num_cols());
  if (cached.num_rows() != base.num_rows() ||
      cached.num_cols() != base.num_cols()) {
    throw std::invalid_argument("cached stats do not match the dataset");
  }

  DeltaStats out;
  const auto rows = mods.touched_rows();
  out.rows.assign(rows.begin(), rows.end());
  out.row_scores.reserve(rows.size());
  out.row_norms.reserve(rows.size());
  for (std::size_t i : rows) {
    const double y = base.label(i);
    double score = cached.row_scores[i];
    double sq = cached.row_norms[i] * cached.row_norms[i];
    ++out.touched_entries;
    for (const CellEdit& e : mods.RowEdits(i)) {
      const double before = base.value(i, e.col);
      score += solution.w[e.col] * y * (e.value - before);
      sq += e.value * e.value - before * before;
      ++out.touched_entries;
    }
    out.row_scores.push_back(score);
    out.row_norms.push_back(std::sqrt(std::max(0.0, sq)));
  }

  const auto cols = mods.touched_cols();
  out.cols.assign(cols.begin(), cols.end());
  out.col_duals.reserve(cols.size());
  out.col_norms.reserve(cols.size());
  out.col_neg_sums.reserve(cols.size());
  out.col_pos_sums.reserve(cols.size());
  for (std::size_t j : cols) {
    double dual = cached.col_duals[j];
    double sq = cached.col_norms[j] * cached.col_norms[j];
    double neg = cached.col_neg_sums[j];
    double pos = cached.col_pos_sums[j];
    ++out.touched_entries;
    mods.ForEachColEdit(j, [&](const CellEdit& e) {
      const double y = base.label(e.row);
      const double before = base.value(e.row, j);
      const double z_old = y * before, z_new = y * e.value;
      dual += solution.alpha[e.row] * (z_new - z_old);
      sq += e.value * e.value - before * before;
      RemoveSigned(z_old, neg, pos);
      AddSigned(z_new, neg, pos);
      ++out.touched_entries;
    });
    out.col_duals.push_back(dual);
    out.col_norms.push_back(std::sqrt(std::max(0.0, sq)));
    out.col_neg_sums.push_back(std::min(0.0, neg));
    out.col_pos_sums.push_back(std::max(0.0, pos));
  }
  return out;
}

double ComputeGap(const CachedStats& cached, const DeltaStats& delta,
                  const Objective& obj) {
  const std::size_t n = cached.num_rows();
  double gap = cached.residual_gap;
  if (n == 0) return std::max(cached.gap_floor, gap);
  const double inv_n = 1.0 / static_cast<double>(n);
  double loss_change = 0.0;
  for (std::size_t k = 0; k < delta.rows.size(); ++k) {
    const std::size_t i = delta.rows[k];
    loss_change += obj.loss.Eval(delta.row_scores[k]) -
                   obj.loss.Eval(cached.row_scores[i]);
  }
  gap += loss_change * inv_n;
  for (std::size_t k = 0; k < delta.cols.size(); ++k) {
    const std::size_t j = delta.cols[k];
    gap += obj.penalty.ConjComponent(delta.col_duals[k] * inv_n) -
           obj.penalty.ConjComponent(cached.col_duals[j] * inv_n);
  }
  return std::max(cached.gap_floor, gap);
}

const char* BoundCaseName(BoundCase c) {
  switch (c) {
    case BoundCase::kDual:
      return "dual";
    case BoundCase::kPrimal:
      return "primal";
    case BoundCase::kCombined:
      return "combined";
  }
  return "unknown";
}

Interval IntersectChecked(const Interval& a, const Interval& b) {
  Interval out = Intersect(a, b);
  if (out.lo > out.hi) {
    if (out.lo - out.hi > kIntersectionSlack) {
      throw InconsistentBoundsError(
          "empty intersection of bounds that must both contain the optimum");
    }
    const double mid = 0.5 * (out.lo + out.hi);
    out = Interval::Point(mid);
  }
  return out;
}

BoundsReport CombineReports(const BoundsReport& dual_side,
                            const BoundsReport& primal_side) {
  if (dual_side.w_bounds.size() != primal_side.w_bounds.size() ||
      dual_side.alpha_bounds.size() != primal_side.alpha_bounds.size()) {
    throw std::invalid_argument("reports have different dimensions");
  }
  BoundsReport out;
  out.bound_case = BoundCase::kCombined;
  out.gap = std::max(dual_side.gap, primal_side.gap);
  out.primal_radius = primal_side.primal_radius;
  out.dual_radius = dual_side.dual_radius;
  out.w_bounds.resize(dual_side.w_bounds.size());
  for (std::size_t j = 0; j < out.w_bounds.size(); ++j) {
    out.w_bounds[j] =
        IntersectChecked(dual_side.w_bounds[j], primal_side.w_bounds[j]);
  }
  out.alpha_bounds.resize(dual_side.alpha_bounds.size());
  for (std::size_t i = 0; i < out.alpha_bounds.size(); ++i) {
    out.alpha_bounds[i] = IntersectChecked(dual_side.alpha_bounds[i],
                                           primal_side.alpha_bounds[i]);
  }
  return out;
}

BoundEngine::BoundEngine(const Objective& obj, const CachedStats& cached,
                         const PrimalDualSolution& solution,
                         const DeltaStats& delta, double gap,
                         const CenterOverrides* overrides)
    : obj_(&obj),
      cached_(&cached),
      solution_(&solution),
      delta_(&delta),
      overrides_(overrides),
      gap_(std::max(0.0, gap)) {
  const double n = static_cast<double>(cached.num_rows());
  inv_n_ = n > 0 ? 1.0 / n : 0.0;
  primal_radius_ = std::sqrt(2.0 * gap_ / obj.lambda());
  dual_radius_ = std::sqrt(2.0 * n * gap_ / obj.gamma());
}

double BoundEngine::WeightCenter(std::size_t j) const {
  if (overrides_) {
    if (const double* v = overrides_->w.Find(j)) return *v;
  }
  return solution_->w[j];
}

double BoundEngine::DualCenter(std::size_t i) const {
  if (overrides_) {
    if (const double* v = overrides_->alpha.Find(i)) return *v;
  }
  return solution_->alpha[i];
}

double BoundEngine::RowScore(std::size_t i) const {
  if (overrides_) {
    if (const double* v = overrides_->row_scores.Find(i)) return *v;
  }
  if (auto k = delta_->RowSlot(i)) return delta_->row_scores[*k];
  return cached_->row_scores[i];
}

double BoundEngine::RowNorm(std::size_t i) const {
  if (auto k = delta_->RowSlot(i)) return delta_->row_norms[*k];
  return cached_->row_norms[i];
}

double BoundEngine::ColDual(std::size_t j) const {
  if (overrides_) {
    if (const double* v = overrides_->col_duals.Find(j)) return *v;
  }
  if (auto k = delta_->ColSlot(j)) return delta_->col_duals[*k];
  return cached_->col_duals[j];
}

double BoundEngine::ColNorm(std::size_t j) const {
  if (auto k = delta_->ColSlot(j)) return delta_->col_norms[*k];
  return cached_->col_norms[j];
}

Interval BoundEngine::ColDualRange(std::size_t j) const {
  if (auto k = delta_->ColSlot(j)) {
    return {delta_->col_neg_sums[*k] * inv_n_,
            delta_->col_pos_sums[*k] * inv_n_};
  }
  return {cached_->col_neg_sums[j] * inv_n_, cached_->col_pos_sums[j] * inv_n_};
}

Interval BoundEngine::WeightBound(std::size_t j, BoundCase c) const {
  switch (c) {
    case BoundCase::kDual: {
      // n^-1 z~_j^T a~* over the dual ball, clipped to the dual box range,
      // then mapped through the monotone d psi*_j.
      const double center = ColDual(j) * inv_n_;
      const double half = ColNorm(j) * inv_n_ * dual_radius_;
      const Interval range = ColDualRange(j);
      double lo = std::max(range.lo, center - half);
      double hi = std::min(range.hi, center + half);
      if (lo > hi) lo = hi = std::clamp(center, range.lo, range.hi);
      return {obj_->penalty.ConjSubgradient(lo).lo,
              obj_->penalty.ConjSubgradient(hi).hi};
    }
    case BoundCase::kPrimal: {
      const double w = WeightCenter(j);
      return {w - primal_radius_, w + primal_radius_};
    }
    case BoundCase::kCombined:
      return IntersectChecked(WeightBound(j, BoundCase::kDual),
                              WeightBound(j, BoundCase::kPrimal));
  }
  return {};
}

Interval BoundEngine::ScoreBound(std::size_t i) const {
  const double s = RowScore(i);
  const double half = RowNorm(i) * primal_radius_;
  return {s - half, s + half};
}

Interval BoundEngine::DualBound(std::size_t i, BoundCase c) const {
  const Interval box = obj_->loss.DualCoordRange();
  switch (c) {
    case BoundCase::kDual: {
      const double a = DualCenter(i);
      return {std::max(box.lo, a - dual_radius_),
              std::min(box.hi, a + dual_radius_)};
    }
    case BoundCase::kPrimal: {
      // -d phi is nonincreasing: the upper score end gives the lower bound.
      const Interval score = ScoreBound(i);
      return Intersect(box, {obj_->loss.DualFromScore(score.hi),
                             obj_->loss.DualFromScore(score.lo)});
    }
    case BoundCase::kCombined:
      return IntersectChecked(DualBound(i, BoundCase::kDual),
                              DualBound(i, BoundCase::kPrimal));
  }
  return {};
}

BoundsReport BoundEngine::Report(BoundCase c) const {
  BoundsReport out;
  out.bound_case = c;
  out.gap = gap_;
  out.primal_radius = primal_radius_;
  out.dual_radius = dual_radius_;
  out.w_bounds.resize(num_cols());
  for (std::size_t j = 0; j < num_cols(); ++j) out.w_bounds[j] = WeightBound(j, c);
  out.alpha_bounds.resize(num_rows());
  for (std::size_t i = 0; i < num_rows(); ++i) {
    out.alpha_bounds[i] = DualBound(i, c);
  }
  return out;
}

std::vector<std::size_t> BoundEngine::TouchedCols() const {
  std::vector<std::size_t> out(delta_->cols);
  if (overrides_) {
    for (const auto& [j, v] : overrides_->w) out.push_back(j);
    for (const auto& [j, v] : overrides_->col_duals) out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> BoundEngine::TouchedRows() const {
  std::vector<std::size_t> out(delta_->rows);
  if (overrides_) {
    for (const auto& [i, v] : overrides_->alpha) out.push_back(i);
    for (const auto& [i, v] : overrides_->row_scores) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SparseBoundsReport BoundEngine::SparseReport(BoundCase c) const {
  SparseBoundsReport out;
  out.bound_case = c;
  out.gap = gap_;
  out.primal_radius = primal_radius_;
  out.dual_radius = dual_radius_;
  for (std::size_t j : TouchedCols()) out.w_bounds.push_back({j, WeightBound(j, c)});
  for (std::size_t i : TouchedRows()) {
    out.alpha_bounds.push_back({i, DualBound(i, c)});
  }
  return out;
}

namespace {

nlohmann::json Header(BoundCase c, double gap, double primal_radius,
                      double dual_radius) {
  return {{"case", BoundCaseName(c)},
          {"gap", gap},
          {"primal_radius", primal_radius},
          {"dual_radius", dual_radius}};
}

BoundCase BoundCaseFromName(const std::string& name) {
  if (name == "dual") return BoundCase::kDual;
  if (name == "primal") return BoundCase::kPrimal;
  if (name == "combined") return BoundCase::kCombined;
  throw std::invalid_argument("unknown bound case '" + name + "'");
}

}  // namespace

std::string BoundsReportToJson(const BoundsReport& report) {
  auto j = Header(report.bound_case, report.gap, report.primal_radius,
                  report.dual_radius);
  j["sparse"] = false;
  auto pairs = [](const std::vector<Interval>& v) {
    auto arr = nlohmann::json::array();
    for (const Interval& iv : v) arr.push_back({iv.lo, iv.hi});
    return arr;
  };
  j["w_bounds"] = pairs(report.w_bounds);
  j["alpha_bounds"] = pairs(report.alpha_bounds);
  return j.dump();
}

std::string SparseBoundsReportToJson(const SparseBoundsReport& report) {
  auto j = Header(report.bound_case, report.gap, report.primal_radius,
                  report.dual_radius);
  j["sparse"] = true;
  auto items = [](const std::vector<CoordinateInterval>& v) {
    auto arr = nlohmann::json::array();
    for (const auto& c : v) {
      arr.push_back(
          {{"index", c.index}, {"lo", c.interval.lo}, {"hi", c.interval.hi}});
    }
    return arr;
  };
  j["w_bounds"] = items(report.w_bounds);
  j["alpha_bounds"] = items(report.alpha_bounds);
  return j.dump();
}

BoundsReport BoundsReportFromJson(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("sparse", false)) {
    throw std::invalid_argument("sparse reports cannot be read back densely");
  }
  BoundsReport out;
  out.bound_case = BoundCaseFromName(j.at("case").get<std::string>());
  out.gap = j.at("gap").get<double>();
  out.primal_radius = j.at("primal_radius").get<double>();
  out.dual_radius = j.at("dual_radius").get<double>();
  for (const auto& p : j.at("w_bounds")) {
    out.w_bounds.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  for (const auto& p : j.at("alpha_bounds")) {
    out.alpha_bounds.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  return out;
}

}  // namespace deltasvm
