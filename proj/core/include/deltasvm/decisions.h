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

#ifndef DELTASVM_DECISIONS_H_
#define DELTASVM_DECISIONS_H_

#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "deltasvm/delta_bounds.h"
#include "deltasvm/interval.h"
#include "deltasvm/sparse_data.h"

namespace deltasvm {

enum class Label { kNegative = -1, kUnknown = 0, kPositive = 1 };

struct Verdict {
  Label label = Label::kUnknown;
  Interval score;
};

struct RetrainPolicy {
  explicit RetrainPolicy(double theta) : theta(theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
  }
  double theta;
};

// Tightest interval for x^T w over the box of per-coordinate bounds: each
// term takes the box corner matching the sign of x_j. Reads only the
// nonzeros of x.
template <typename WeightBoundFn>
  requires std::invocable<WeightBoundFn&, std::size_t>
Interval ScoreBounds(std::span<const Entry> x, WeightBoundFn&& weight_bound) {
  Interval out{0.0, 0.0};
  for (const Entry& e : x) {
    const Interval b = weight_bound(e.index);
    if (e.value >= 0.0) {
      out.lo += e.value * b.lo;
      out.hi += e.value * b.hi;
    } else {
      out.lo += e.value * b.hi;
      out.hi += e.value * b.lo;
    }
  }
  return out;
}

Interval ScoreBounds(std::span<const Entry> x,
                     std::span<const Interval> w_bounds);

// -1 if U < 0, +1 if L >= 0, unknown otherwise.
Verdict ClassifyScore(const Interval& score);
Verdict Classify(std::span<const Entry> x, std::span<const Interval> w_bounds);

// sqrt(sum_j max(w_j - L_j, U_j - w_j, 0)^2), an upper bound on
// ||w - w~||_2 for any w~ inside the box.
double ParamChangeUpper(std::span<const double> w_hat,
                        std::span<const Interval> w_bounds);

// Retrain iff the drift bound reaches theta.
bool ShouldRetrain(const RetrainPolicy& policy, double drift_upper);

// Rows whose new score is certified above 1 over the primal ball, so their
// new optimal dual variable is zero. Sorted.
std::vector<std::size_t> ScreenSamples(const BoundEngine& engine);

// {"index": int, "label": int or "unknown", "L": f, "U": f}
std::string VerdictToJsonLine(std::size_t index, const Verdict& verdict);

}  // namespace deltasvm

#endif  // DELTASVM_DECISIONS_H_
