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

// Loss and penalty functions of the regularized risk
//
//   P(w) = 1/n sum_i phi(z_i^T w) + psi(w)
//   D(a) = -1/n sum_i phi*(-a_i) - psi*(1/n Z^T a)
//
// Subdifferentials are returned as closed intervals even where the function
// is differentiable, so bound formulas written with inf/sup over a
// subdifferential apply unchanged to nonsmooth instances.

#ifndef DELTASVM_OBJECTIVES_H_
#define DELTASVM_OBJECTIVES_H_

#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "deltasvm/interval.h"
#include "deltasvm/sparse_data.h"

namespace deltasvm {

// phi: R -> R_+, convex. Conjugate() returns nullopt outside dom phi*.
template <typename T>
concept LossFunction = requires(const T& loss, double r) {
  { loss.Eval(r) } -> std::convertible_to<double>;
  { loss.Conjugate(r) } -> std::same_as<std::optional<double>>;
  { loss.Subgradient(r) } -> std::same_as<Interval>;
  // Feasible range of a_i, i.e. dom of a -> phi*(-a).
  { loss.DualCoordRange() } -> std::same_as<Interval>;
  // Lipschitz constant of the derivative; 1/gamma for a gamma^-1-smooth loss.
  { loss.SmoothnessConstant() } -> std::convertible_to<double>;
};

// psi(w) = sum_j psi_j(w_j).
template <typename T>
concept DecomposablePenalty = requires(const T& pen, double v,
                                       std::span<const double> w) {
  { pen.Component(v) } -> std::convertible_to<double>;
  { pen.ConjComponent(v) } -> std::convertible_to<double>;
  { pen.ConjSubgradient(v) } -> std::same_as<Interval>;
  { pen.Eval(w) } -> std::convertible_to<double>;
  { pen.StrongConvexity() } -> std::convertible_to<double>;
};

class SmoothedHinge {
 public:
  // Throws std::invalid_argument unless gamma > 0.
  explicit SmoothedHinge(double gamma);

  double gamma() const { return gamma_; }

  // 0 for r > 1, 1 - r - gamma/2 for r < 1 - gamma, (1-r)^2/(2 gamma) on the
  // closed middle piece [1 - gamma, 1].
  double Eval(double r) const;
  // u + gamma/2 u^2 on [-1, 0].
  std::optional<double> Conjugate(double u) const;
  Interval Subgradient(double r) const { return Interval::Point(Derivative(r)); }
  double Derivative(double r) const;
  // -phi'(r), the optimal dual coordinate for score r. Nonincreasing in r.
  double DualFromScore(double r) const { return -Derivative(r); }

  Interval DualCoordRange() const { return {0.0, 1.0}; }
  double SmoothnessConstant() const { return 1.0 / gamma_; }

 private:
  double gamma_;
};

class L2Penalty {
 public:
  // Throws std::invalid_argument unless lambda > 0.
  explicit L2Penalty(double lambda);

  double lambda() const { return lambda_; }

  double Component(double w) const { return 0.5 * lambda_ * w * w; }
  double ConjComponent(double v) const { return v * v / (2.0 * lambda_); }
  Interval ConjSubgradient(double v) const {
    return Interval::Point(v / lambda_);
  }
  Interval Subgradient(double w) const { return Interval::Point(lambda_ * w); }

  double Eval(std::span<const double> w) const;
  double ConjEval(std::span<const double> v) const;
  double StrongConvexity() const { return lambda_; }

 private:
  double lambda_;
};

static_assert(LossFunction<SmoothedHinge>);
static_assert(DecomposablePenalty<L2Penalty>);

// The shipped model: smoothed hinge loss with an L2 penalty. Both the
// smoothness and the strong-convexity property hold, so dual-side,
// primal-side and combined bounds are all available.
struct Objective {
  SmoothedHinge loss{0.5};
  L2Penalty penalty{1.0};

  Objective() = default;
  Objective(double gamma, double lambda) : loss(gamma), penalty(lambda) {}

  double gamma() const { return loss.gamma(); }
  double lambda() const { return penalty.lambda(); }
};

// {"loss": "smoothed_hinge", "gamma": f, "penalty": "l2", "lambda": f}
std::string ObjectiveToJson(const Objective& obj);
Objective ObjectiveFromJson(const std::string& text);

// inf and sup of n^-1 z^T a over the dual box [0, 1]^n for one column of Z,
// given as its sparse entries: n^-1 times the negative / positive entry sums.
Interval DualDomainColumnRange(std::span<const double> z_col, std::size_t n);

}  // namespace deltasvm

#endif  // DELTASVM_OBJECTIVES_H_
