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

#include "deltasvm/decisions.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace deltasvm {

Interval ScoreBounds(std::span<const Entry> x,
                     std::span<const Interval> w_bounds) {
  return ScoreBounds(x, [&](std::size_t j) {
    if (j >= w_bounds.size()) throw std::out_of_range("feature index");
    return w_bounds[j];
  });
}

Verdict ClassifyScore(const Interval& score) {
  Verdict v;
  v.score = score;
  if (score.hi < 0.0) v.label = Label::kNegative;
  else if (score.lo >= 0.0) v.label = Label::kPositive;
  else v.label = Label::kUnknown;
  return v;
}

Verdict Classify(std::span<const Entry> x, std::span<const Interval> w_bounds) {
  return ClassifyScore(ScoreBounds(x, w_bounds));
}

double ParamChangeUpper(std::span<const double> w_hat,
                        std::span<const Interval> w_bounds) {
  if (w_hat.size() != w_bounds.size()) {
    throw std::invalid_argument("w and bounds differ in length");
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < w_hat.size(); ++j) {
    const double t = std::max(
        {w_hat[j] - w_bounds[j].lo, w_bounds[j].hi - w_hat[j], 0.0});
    sq += t * t;
  }
  return std::sqrt(sq);
}

bool ShouldRetrain(const RetrainPolicy& policy, double drift_upper) {
  return drift_upper >= policy.theta;
}

std::vector<std::size_t> ScreenSamples(const BoundEngine& engine) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < engine.num_rows(); ++i) {
    if (engine.ScoreBound(i).lo > 1.0) out.push_back(i);
  }
  return out;
}

std::string VerdictToJsonLine(std::size_t index, const Verdict& verdict) {
  nlohmann::json j;
  j["index"] = index;
  if (verdict.label == Label::kUnknown) j["label"] = "unknown";
  else j["label"] = static_cast<int>(verdict.label);
  j["L"] = verdict.score.lo;
  j["U"] = verdict.score.hi;
  return j.dump();
}

}  // namespace deltasvm
