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

#ifndef DELTASVM_INTERVAL_H_
#define DELTASVM_INTERVAL_H_

#include <algorithm>

namespace deltasvm {

// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval Point(double x) { return {x, x}; }

  double width() const { return hi - lo; }
  bool Contains(double x, double slack = 0.0) const {
    return lo - slack <= x && x <= hi + slack;
  }
  bool Within(const Interval& outer, double slack = 0.0) const {
    return outer.lo - slack <= lo && hi <= outer.hi + slack;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Coordinate-wise intersection. The result may be empty (lo > hi); callers
// decide whether that is an error.
inline Interval Intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

}  // namespace deltasvm

#endif  // DELTASVM_INTERVAL_H_
