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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace deltasvm {
namespace {

double RowScore(const SparseDataset& data, std::size_t i,
                std::span<const double> w) {
  double s = 0.0;
  for (const Entry& e : data.row(i)) s += e.value * w[e.index];
  return data.label(i) * s;
}

// (n lambda)^-1 Z^T alpha.
std::vector<double> PrimalFromDual(const SparseDataset& data,
                                   const Objective& obj,
                                   std::span<const double> alpha) {
  std::vector<double> w(data.num_cols(), 0.0);
  const double n = static_cast<double>(data.num_rows());
  if (n == 0) return w;
  for (std::size_t j = 0; j < data.num_cols(); ++j) {
    double s = 0.0;
    for (const Entry& e : data.col(j)) {
      s += data.label(e.index) * e.value * alpha[e.index];
    }
    w[j] = s / (n * obj.lambda());
  }
  return w;
}

// Primal and dual values with psi*(n^-1 Z^T a) evaluated through w, valid
// while w = (n lambda)^-1 Z^T a holds.
EpochRecord FastObjectives(const SparseDataset& data, const Objective& obj,
                           std::span<const double> w,
                           std::span<const double> alpha) {
  const std::size_t n = data.num_rows();
  double loss = 0.0, conj = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    loss += obj.loss.Eval(RowScore(data, i, w));
    conj += -alpha[i] + 0.5 * obj.gamma() * alpha[i] * alpha[i];
  }
  const double reg = obj.penalty.Eval(w);
  const double inv_n = n ? 1.0 / static_cast<double>(n) : 0.0;
  return {loss * inv_n + reg, -conj * inv_n - reg};
}

}  // namespace

double PrimalObjective(const SparseDataset& data, const Objective& obj,
                       std::span<const double> w) {
  if (w.size() != data.num_cols()) {
    throw std::invalid_argument("w has the wrong dimension");
  }
  const std::size_t n = data.num_rows();
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) loss += obj.loss.Eval(RowScore(data, i, w));
  const double reg = obj.penalty.Eval(w);
  return n ? loss / static_cast<double>(n) + reg : reg;
}

std::optional<double> DualObjective(const SparseDataset& data,
                                    const Objective& obj,
                                    std::span<const double> alpha) {
  const std::size_t n = data.num_rows();
  if (alpha.size() != n) {
    throw std::invalid_argument("alpha has the wrong dimension");
  }
  if (n == 0) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  double conj = 0.0;
  for (double a : alpha) {
    auto c = obj.loss.Conjugate(-a);
    if (!c) return std::nullopt;
    conj += *c;
  }
  double pen = 0.0;
  for (std::size_t j = 0; j < data.num_cols(); ++j) {
    double s = 0.0;
    for (const Entry& e : data.col(j)) {
      s += data.label(e.index) * e.value * alpha[e.index];
    }
    pen += obj.penalty.ConjComponent(s * inv_n);
  }
  return -conj * inv_n - pen;
}

PrimalDualSolution Train(const SparseDataset& data, const Objective& obj,
                         const TrainOptions& options,
                         const PrimalDualSolution* warm_start,
                         std::vector<EpochRecord>* trace) {
  if (!(options.tolerance > 0.0)) {
    throw std::invalid_argument("tolerance must be > 0");
  }
  const std::size_t n = data.num_rows();
  PrimalDualSolution sol;
  sol.alpha.assign(n, 0.0);
  if (warm_start != nullptr) {
    if (warm_start->alpha.size() != n) {
      throw std::invalid_argument("warm start has the wrong dimension");
    }
    for (std::size_t i = 0; i < n; ++i) {
      sol.alpha[i] = std::clamp(warm_start->alpha[i], 0.0, 1.0);
    }
  }
  sol.w = PrimalFromDual(data, obj, sol.alpha);
  if (n == 0) {
    sol.residual_gap = 0.0;
    return sol;
  }

  const double gamma = obj.gamma();
  const double scale = 1.0 / (static_cast<double>(n) * obj.lambda());
  std::vector<double> sq_norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double q = 0.0;
    for (const Entry& e : data.row(i)) q += e.value * e.value;
    sq_norms[i] = q;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(options.seed);

  auto converged = [&](const EpochRecord& rec) {
    return rec.primal - rec.dual <=
           options.tolerance * std::max(1.0, std::abs(rec.primal));
  };

  EpochRecord rec = FastObjectives(data, obj, sol.w, sol.alpha);
  if (trace) trace->push_back(rec);
  sol.converged = converged(rec);
  while (!sol.converged && sol.epochs < options.max_epochs) {
    if (options.shuffle) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      const double y = data.label(i);
      const double score = RowScore(data, i, sol.w);
      const double step =
          (1.0 - score - gamma * sol.alpha[i]) / (gamma + sq_norms[i] * scale);
      const double next = std::clamp(sol.alpha[i] + step, 0.0, 1.0);
      const double delta = next - sol.alpha[i];
      if (delta == 0.0) continue;
      sol.alpha[i] = next;
      const double c = delta * y * scale;
      for (const Entry& e : data.row(i)) sol.w[e.index] += c * e.value;
    }
    ++sol.epochs;
    rec = FastObjectives(data, obj, sol.w, sol.alpha);
    if (trace) trace->push_back(rec);
    sol.converged = converged(rec);
  }

  // Re-derive w from alpha so the linkage holds to rounding, then measure
  // the gap of the returned pair from scratch.
  sol.w = PrimalFromDual(data, obj, sol.alpha);
  const double p = PrimalObjective(data, obj, sol.w);
  const double d = *DualObjective(data, obj, sol.alpha);
  sol.residual_gap = std::max(0.0, p - d);
  sol.objective_scale = std::abs(p) + std::abs(d);
  return sol;
}

double GapFloor(double objective_scale) {
  return 16.0 * std::numeric_limits<double>::epsilon() * std::abs(objective_scale);
}

CachedStats BuildCachedStats(const SparseDataset& data,
                             const PrimalDualSolution& solution) {
  const std::size_t n = data.num_rows(), d = data.num_cols();
  if (solution.w.size() != d || solution.alpha.size() != n) {
    throw std::invalid_argument("solution does not match the dataset");
  }
  CachedStats s;
  s.residual_gap = solution.residual_gap;
  s.gap_floor = GapFloor(solution.objective_scale);
  s.row_scores.resize(n);
  s.row_norms.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dot = 0.0, sq = 0.0;
    for (const Entry& e : data.row(i)) {
      dot += e.value * solution.w[e.index];
      sq += e.value * e.value;
    }
    s.row_scores[i] = data.label(i) * dot;
    s.row_norms[i] = std::sqrt(sq);
  }
  s.col_duals.resize(d);
  s.col_norms.resize(d);
  s.col_neg_sums.resize(d);
  s.col_pos_sums.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    double dot = 0.0, sq = 0.0, neg = 0.0, pos = 0.0;
    for (const Entry& e : data.col(j)) {
      const double z = data.label(e.index) * e.value;
      dot += z * solution.alpha[e.index];
      sq += e.value * e.value;
      if (z < 0.0) neg += z;
      else pos += z;
    }
    s.col_duals[j] = dot;
    s.col_norms[j] = std::sqrt(sq);
    s.col_neg_sums[j] = neg;
    s.col_pos_sums[j] = pos;
  }
  return s;
}

std::string SolutionToJson(const PrimalDualSolution& solution,
                           const CachedStats& stats) {
  nlohmann::json j;
  j["version"] = 1;
  j["w"] = solution.w;
  j["alpha"] = solution.alpha;
  j["residual_gap"] = solution.residual_gap;
  j["objective_scale"] = solution.objective_scale;
  j["row_scores"] = stats.row_scores;
  j["row_norms"] = stats.row_norms;
  j["col_duals"] = stats.col_duals;
  j["col_norms"] = stats.col_norms;
  j["col_neg_sums"] = stats.col_neg_sums;
  j["col_pos_sums"] = stats.col_pos_sums;
  return j.dump();
}

void SolutionFromJson(const std::string& text, PrimalDualSolution& solution,
                      CachedStats& stats) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("version").get<int>() != 1) {
    throw std::invalid_argument("unsupported stats version");
  }
  solution = PrimalDualSolution{};
  solution.w = j.at("w").get<std::vector<double>>();
  solution.alpha = j.at("alpha").get<std::vector<double>>();
  solution.residual_gap = j.at("residual_gap").get<double>();
  solution.objective_scale = j.at("objective_scale").get<double>();
  stats = CachedStats{};
  stats.residual_gap = solution.residual_gap;
  stats.gap_floor = GapFloor(solution.objective_scale);
  stats.row_scores = j.at("row_scores").get<std::vector<double>>();
  stats.row_norms = j.at("row_norms").get<std::vector<double>>();
  stats.col_duals = j.at("col_duals").get<std::vector<double>>();
  stats.col_norms = j.at("col_norms").get<std::vector<double>>();
  stats.col_neg_sums = j.at("col_neg_sums").get<std::vector<double>>();
  stats.col_pos_sums = j.at("col_pos_sums").get<std::vector<double>>();
  const std::size_t n = solution.alpha.size(), d = solution.w.size();
  if (stats.row_scores.size() != n || stats.row_norms.size() != n ||
      stats.col_duals.size() != d || stats.col_norms.size() != d ||
      stats.col_neg_sums.size() != d || stats.col_pos_sums.size() != d) {
    throw std::invalid_argument("stats arrays have inconsistent lengths");
  }
}

}  // namespace deltasvm
