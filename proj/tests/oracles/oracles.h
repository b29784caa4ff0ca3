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

// Test-only reference implementations. Everything here is written against
// dense arrays with its own formulas so that it shares no code path with
// the library under test.

#ifndef DELTASVM_TESTS_ORACLES_H_
#define DELTASVM_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "deltasvm/modification.h"
#include "deltasvm/objectives.h"
#include "deltasvm/solver.h"
#include "deltasvm/sparse_data.h"

namespace deltasvm::oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense ToDense(const SparseDataset& data) {
  Dense x(data.num_rows(), std::vector<double>(data.num_cols(), 0.0));
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    for (const Entry& e : data.row(i)) x[i][e.index] = e.value;
  }
  return x;
}

inline Dense ApplyDense(Dense x, const std::vector<CellEdit>& edits) {
  for (const CellEdit& e : edits) x[e.row][e.col] = e.value;
  return x;
}

inline double Hinge(double r, double g) {
  if (r >= 1.0) return 0.0;
  if (r <= 1.0 - g) return 1.0 - r - g / 2.0;
  return (1.0 - r) * (1.0 - r) / (2.0 * g);
}

inline double HingeConj(double u, double g) { return u + g * u * u / 2.0; }

inline double DensePrimal(const Dense& x, const std::vector<int>& y,
                          const std::vector<double>& w, double g, double lam) {
  const std::size_t n = x.size();
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += y[i] * x[i][j] * w[j];
    loss += Hinge(s, g);
  }
  double pen = 0.0;
  for (double v : w) pen += v * v;
  return (n ? loss / n : 0.0) + lam * pen / 2.0;
}

inline double DenseDual(const Dense& x, const std::vector<int>& y,
                        const std::vector<double>& a, std::size_t d, double g,
                        double lam) {
  const std::size_t n = x.size();
  double conj = 0.0;
  std::vector<double> v(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    conj += HingeConj(-a[i], g);
    for (std::size_t j = 0; j < d; ++j) v[j] += y[i] * x[i][j] * a[i] / n;
  }
  double pen = 0.0;
  for (double t : v) pen += t * t;
  return -conj / n - pen / (2.0 * lam);
}

// Golden-section minimization of a unimodal f on [a, b].
inline double GoldenSection(const std::function<double(double)>& f, double a,
                            double b, double tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

// Optimum of the training problem at gap <= 1e-12, warm-started if given.
inline PrimalDualSolution Retrain(const SparseDataset& data,
                                  const Objective& obj,
                                  const PrimalDualSolution* warm = nullptr) {
  TrainOptions opt;
  opt.tolerance = 1e-13;
  opt.max_epochs = 200000;
  return Train(data, obj, opt, warm);
}

// Min and max of eta^T q over `samples` random points on the sphere
// |q - c| = radius.
inline std::pair<double, double> SphereExtremes(const std::vector<double>& eta,
                                                const std::vector<double>& c,
                                                double radius,
                                                std::size_t samples,
                                                std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<double> u(c.size());
  for (std::size_t s = 0; s < samples; ++s) {
    double nrm = 0.0;
    for (double& t : u) { t = normal(rng); nrm += t * t; }
    nrm = std::sqrt(nrm);
    double val = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      val += eta[k] * (c[k] + radius * u[k] / nrm);
    }
    lo = std::min(lo, val);
    hi = std::max(hi, val);
  }
  return {lo, hi};
}

// Random small dataset with values in [-1, 1]; rows normalized when asked.
inline SparseDataset RandomDataset(std::size_t n, std::size_t d,
                                   double density, std::mt19937_64& rng,
                                   bool normalize = true) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::bernoulli_distribution pos(0.5);
  std::vector<std::vector<Entry>> rows(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (keep(rng)) rows[i].push_back({j, val(rng)});
    }
    labels[i] = pos(rng) ? 1 : -1;
  }
  auto data = SparseDataset::FromRows(d, std::move(rows), std::move(labels));
  return normalize ? NormalizeRows(data) : data;
}

// Random edits; any cell, values in [-1, 1], zero with probability 0.1.
inline std::vector<CellEdit> RandomEdits(std::size_t n, std::size_t d,
                                         std::size_t count,
                                         std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> ri(0, n - 1), cj(0, d - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution zero(0.1);
  std::vector<CellEdit> out;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back({ri(rng), cj(rng), zero(rng) ? 0.0 : val(rng)});
  }
  return out;
}

inline double RelErr(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace deltasvm::oracle

#endif  // DELTASVM_TESTS_ORACLES_H_
