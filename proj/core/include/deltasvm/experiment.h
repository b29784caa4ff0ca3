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

// Experiment harness: synthetic data, random modification scenarios, and
// per-trial evaluation of the bounds against a warm-started retrain.

#ifndef DELTASVM_EXPERIMENT_H_
#define DELTASVM_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "deltasvm/delta_bounds.h"
#include "deltasvm/interval.h"
#include "deltasvm/modification.h"
#include "deltasvm/objectives.h"
#include "deltasvm/partial_opt.h"
#include "deltasvm/solver.h"
#include "deltasvm/sparse_data.h"

namespace deltasvm {

struct SyntheticSpec {
  std::size_t n = 1000;
  std::size_t d = 100;
  double density = 0.05;
  std::uint64_t seed = 0;
};

// Values uniform in [0, 1] on a Bernoulli(density) mask; labels are the
// sign of a random Gaussian hyperplane with 10% of them flipped. Rows are
// not normalized.
SparseDataset GenerateSynthetic(const SyntheticSpec& spec);

// "synthetic:n,d,density[,seed]".
SyntheticSpec ParseSyntheticSpec(const std::string& text);

// A LIBSVM path or a "synthetic:..." source string.
SparseDataset LoadDataSource(const std::string& source);

// Per-column [min, max] over the whole column, implicit zeros included.
std::vector<Interval> ColumnRanges(const SparseDataset& data);

// spot: `magnitude` distinct cells uniformly over all n*d cells.
// instance: `magnitude` distinct rows, every nonzero of each.
// feature: `magnitude` distinct columns, every nonzero of each.
// New values are uniform in the column's [min, max]. Deterministic in
// `seed`. Throws std::invalid_argument if the magnitude is infeasible.
ModificationSet GenerateModifications(const SparseDataset& data,
                                      Scenario scenario, std::size_t magnitude,
                                      std::uint64_t seed);
ModificationSet GenerateModifications(const SparseDataset& data,
                                      const std::vector<Interval>& ranges,
                                      Scenario scenario, std::size_t magnitude,
                                      std::uint64_t seed);

// A trained model on the training half plus the held-out half.
struct Baseline {
  SparseDataset train;
  SparseDataset test;
  Objective objective;
  PrimalDualSolution solution;
  CachedStats stats;
  std::vector<Interval> column_ranges;
};

Baseline PrepareBaseline(SparseDataset train, SparseDataset test,
                         const Objective& obj, const TrainOptions& options);

struct TrialOptions {
  TrainOptions retrain;
  PartialBudget budget;
  double theta = 0.1;
  std::size_t timing_repeats = 3;
};

struct TrialResult {
  Scenario scenario = Scenario::kSpot;
  std::size_t magnitude = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::size_t num_edits = 0;

  double gap = 0.0;
  double determination_rate = 0.0;
  double drift_upper = 0.0;
  std::size_t screened = 0;
  bool retrain_triggered = false;

  double gap_tightened = 0.0;
  double determination_rate_tightened = 0.0;
  double drift_upper_tightened = 0.0;
  std::size_t screened_tightened = 0;

  double true_drift = 0.0;
  // Certified labels, drift bounds or screened rows contradicted by the
  // retrained optimum, counting the retrain's own error radius.
  std::size_t contradictions = 0;
  bool converged = true;

  double bound_time = 0.0;    // seconds
  double partial_time = 0.0;  // seconds
  double retrain_time = 0.0;  // seconds
  double time_ratio = 0.0;    // bound_time / retrain_time
};

// Bound path, decisions, partial optimization, decisions again, and a
// warm-started retrain that serves both as oracle and timing baseline.
TrialResult RunTrial(const Baseline& baseline, const ModificationSet& mods,
                     Scenario scenario, std::size_t magnitude,
                     std::uint64_t seed, const TrialOptions& options);

struct ExperimentConfig {
  std::string data = "synthetic:2000,200,0.05,0";
  std::vector<double> lambdas{0.001, 0.01, 0.1, 1.0};
  double gamma = 0.5;
  std::vector<Scenario> scenarios{Scenario::kSpot};
  std::vector<std::size_t> magnitudes{1, 100, 10000};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  double train_fraction = 0.8;
  std::uint64_t split_seed = 0;
  double tolerance = 1e-9;
  std::size_t max_epochs = 1000;
  double theta = 0.1;
  std::size_t timing_repeats = 3;
  PartialBudget budget;
};

// Trials over scenarios x magnitudes x lambdas x seeds, in that nesting
// order. Magnitudes infeasible for a scenario are skipped.
std::vector<TrialResult> RunExperiment(const ExperimentConfig& config);

// One row per trial. Timing columns are the only nondeterministic output;
// leave them out for byte-reproducible tables.
std::string TrialsToCsv(const std::vector<TrialResult>& trials,
                        bool include_timing = true);

// Mean/min/max of every numeric field per (scenario, magnitude, lambda),
// over converged trials only.
std::string AggregatesToJson(const std::vector<TrialResult>& trials,
                             bool include_timing = true);

// Writes trials.csv and aggregates.json into `dir` (created if missing).
void EmitTables(const std::vector<TrialResult>& trials, const std::string& dir,
                bool include_timing = true);

}  // namespace deltasvm

#endif  // DELTASVM_EXPERIMENT_H_
