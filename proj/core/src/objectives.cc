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

#include "deltasvm/objectives.h"

#include <stdexcept>

#include "json.hpp"

namespace deltasvm {

SmoothedHinge::SmoothedHinge(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
}

double SmoothedHinge::Eval(double r) const {
  if (r > 1.0) return 0.0;
  if (r < 1.0 - gamma_) return 1.0 - r - 0.5 * gamma_;
  const double m = 1.0 - r;
  return m * m / (2.0 * gamma_);
}

std::optional<double> SmoothedHinge::Conjugate(double u) const {
  if (u < -1.0 || u > 0.0) return std::nullopt;
  return u + 0.5 * gamma_ * u * u;
}

double SmoothedHinge::Derivative(double r) const {
  if (r > 1.0) return 0.0;
  if (r < 1.0 - gamma_) return -1.0;
  return -(1.0 - r) / gamma_;
}

L2Penalty::L2Penalty(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
}

double L2Penalty::Eval(std::span<const double> w) const {
  double s = 0.0;
  for (double x : w) s += Component(x);
  return s;
}

double L2Penalty::ConjEval(std::span<const double> v) const {
  double s = 0.0;
  for (double x : v) s += ConjComponent(x);
  return s;
}

std::string ObjectiveToJson(const Objective& obj) {
  nlohmann::json j = {{"loss", "smoothed_hinge"},
                      {"gamma", obj.gamma()},
                      {"penalty", "l2"},
                      {"lambda", obj.lambda()}};
  return j.dump();
}

Objective ObjectiveFromJson(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("loss").get<std::string>() != "smoothed_hinge") {
    throw std::invalid_argument("unsupported loss '" +
                                j.at("loss").get<std::string>() + "'");
  }
  if (j.at("penalty").get<std::string>() != "l2") {
    throw std::invalid_argument("unsupported penalty '" +
                                j.at("penalty").get<std::string>() + "'");
  }
  return Objective(j.at("gamma").get<double>(), j.at("lambda").get<double>());
}

Interval DualDomainColumnRange(std::span<const double> z_col, std::size_t n) {
  if (n == 0) return {0.0, 0.0};
  double neg = 0.0, pos = 0.0;
  for (double z : z_col) {
    if (z < 0.0) neg += z;
    else pos += z;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  return {neg * inv_n, pos * inv_n};
}

}  // namespace deltasvm
