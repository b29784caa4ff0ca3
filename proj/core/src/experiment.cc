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

#include "deltasvm/experiment.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "deltasvm/decisions.h"
#include "json.hpp"

namespace deltasvm {
namespace {

constexpr char kSyntheticPrefix[] = "synthetic:";

double ParseDouble(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("bad number: " + s);
  }
  return v;
}

std::uint64_t ParseUnsigned(const std::string& s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("bad integer: " + s);
  }
  return v;
}

// k distinct values from [0, universe), sorted. Floyd's algorithm.
std::vector<std::uint64_t> SampleDistinct(std::uint64_t universe,
                                          std::uint64_t k,
                                          std::mt19937_64& rng) {
  std::unordered_set<std::uint64_t> picked;
  picked.reserve(k);
  for (std::uint64_t j = universe - k; j < universe; ++j) {
    const std::uint64_t t =
        std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
    if (!picked.insert(t).second) picked.insert(j);
  }
  std::vector<std::uint64_t> out(picked.begin(), picked.end());
  std::sort(out.begin(), out.end());
  return out;
}

double Draw(const Interval& range, std::mt19937_64& rng) {
  if (range.hi <= range.lo) return range.lo;
  return std::uniform_real_distribution<double>(range.lo, range.hi)(rng);
}

using Clock = std::chrono::steady_clock;

// Minimum wall time over `repeats` runs of fn, in seconds.
template <typename Fn>
double MinTime(std::size_t repeats, Fn&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(1, repeats); ++r) {
    const auto start = Clock::now();
    fn();
    const std::chrono::duration<double> dt = Clock::now() - start;
    best = std::min(best, dt.count());
  }
  return best;
}

double Dot(std::span<const Entry> x, const std::vector<double>& w) {
  double s = 0.0;
  for (const Entry& e : x) s += e.value * w[e.index];
  return s;
}

double Norm(std::span<const Entry> x) {
  double s = 0.0;
  for (const Entry& e : x) s += e.value * e.value;
  return std::sqrt(s);
}

double DeterminationRate(const SparseDataset& test,
                         const std::vector<Interval>& w_bounds) {
  if (test.num_rows() == 0) return 0.0;
  std::size_t determined = 0;
  for (std::size_t i = 0; i < test.num_rows(); ++i) {
    if (Classify(test.row(i), w_bounds).label != Label::kUnknown) ++determined;
  }
  return static_cast<double>(determined) /
         static_cast<double>(test.num_rows());
}

// Certified labels that the oracle ball rules out.
std::size_t LabelContradictions(const SparseDataset& test,
                                const std::vector<Interval>& w_bounds,
                                const std::vector<double>& w_oracle,
                                double oracle_radius) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < test.num_rows(); ++i) {
    const auto x = test.row(i);
    const Label label = Classify(x, w_bounds).label;
    if (label == Label::kUnknown) continue;
    const double score = Dot(x, w_oracle);
    const double slack = Norm(x) * oracle_radius + 1e-12;
    if (label == Label::kPositive && score + slack < 0.0) ++bad;
    if (label == Label::kNegative && score - slack > 0.0) ++bad;
  }
  return bad;
}

struct Field {
  const char* name;
  double (*get)(const TrialResult&);
  bool timing;
};

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      {"num_edits", [](const TrialResult& t) { return double(t.num_edits); }, false},
      {"gap", [](const TrialResult& t) { return t.gap; }, false},
      {"determination_rate", [](const TrialResult& t) { return t.determination_rate; }, false},
      {"drift_upper", [](const TrialResult& t) { return t.drift_upper; }, false},
      {"screened", [](const TrialResult& t) { return double(t.screened); }, false},
      {"retrain_triggered", [](const TrialResult& t) { return t.retrain_triggered ? 1.0 : 0.0; }, false},
      {"gap_tightened", [](const TrialResult& t) { return t.gap_tightened; }, false},
      {"determination_rate_tightened", [](const TrialResult& t) { return t.determination_rate_tightened; }, false},
      {"drift_upper_tightened", [](const TrialResult& t) { return t.drift_upper_tightened; }, false},
      {"screened_tightened", [](const TrialResult& t) { return double(t.screened_tightened); }, false},
      {"true_drift", [](const TrialResult& t) { return t.true_drift; }, false},
      {"contradictions", [](const TrialResult& t) { return double(t.contradictions); }, false},
      {"bound_time", [](const TrialResult& t) { return t.bound_time; }, true},
      {"partial_time", [](const TrialResult& t) { return t.partial_time; }, true},
      {"retrain_time", [](const TrialResult& t) { return t.retrain_time; }, true},
      {"time_ratio", [](const TrialResult& t) { return t.time_ratio; }, true},
  };
  return fields;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

SparseDataset GenerateSynthetic(const SyntheticSpec& spec) {
  if (!(spec.density > 0.0 && spec.density <= 1.0)) {
    throw std::invalid_argument("density must be in (0, 1]");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w_true(spec.d);
  for (double& v : w_true) v = normal(rng);

  std::vector<std::vector<Entry>> rows(spec.n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::uint64_t cells = static_cast<std::uint64_t>(spec.n) * spec.d;
  if (spec.density >= 1.0) {
    for (std::size_t i = 0; i < spec.n; ++i) {
      for (std::size_t j = 0; j < spec.d; ++j) rows[i].push_back({j, unit(rng)});
    }
  } else {
    std::geometric_distribution<std::uint64_t> skip(spec.density);
    for (std::uint64_t c = skip(rng); c < cells; c += 1 + skip(rng)) {
      rows[c / spec.d].push_back({static_cast<std::size_t>(c % spec.d), unit(rng)});
    }
  }

  std::vector<int> labels(spec.n);
  std::bernoulli_distribution flip(0.1);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double s = 0.0;
    for (const Entry& e : rows[i]) s += e.value * w_true[e.index];
    int y = s >= 0.0 ? 1 : -1;
    if (flip(rng)) y = -y;
    labels[i] = y;
  }
  return SparseDataset::FromRows(spec.d, std::move(rows), std::move(labels));
}

SyntheticSpec ParseSyntheticSpec(const std::string& text) {
  std::string body = text;
  if (body.rfind(kSyntheticPrefix, 0) == 0) {
    body = body.substr(sizeof(kSyntheticPrefix) - 1);
  }
  std::vector<std::string> parts;
  std::stringstream ss(body);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 4) {
    throw std::invalid_argument("expected synthetic:n,d,density[,seed]");
  }
  SyntheticSpec spec;
  spec.n = ParseUnsigned(parts[0]);
  spec.d = ParseUnsigned(parts[1]);
  spec.density = ParseDouble(parts[2]);
  if (parts.size() == 4) spec.seed = ParseUnsigned(parts[3]);
  return spec;
}

SparseDataset LoadDataSource(const std::string& source) {
  if (source.rfind(kSyntheticPrefix, 0) == 0) {
    return GenerateSynthetic(ParseSyntheticSpec(source));
  }
  return LoadLibsvmFile(source);
}

std::vector<Interval> ColumnRanges(const SparseDataset& data) {
  std::vector<Interval> out(data.num_cols());
  for (std::size_t j = 0; j < data.num_cols(); ++j) {
    const auto col = data.col(j);
    Interval r{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
    for (const Entry& e : col) {
      r.lo = std::min(r.lo, e.value);
      r.hi = std::max(r.hi, e.value);
    }
    if (col.size() < data.num_rows() || col.empty()) {
      r.lo = std::min(r.lo, 0.0);
      r.hi = std::max(r.hi, 0.0);
    }
    out[j] = r;
  }
  return out;
}

ModificationSet GenerateModifications(const SparseDataset& data,
                                      Scenario scenario, std::size_t magnitude,
                                      std::uint64_t seed) {
  return GenerateModifications(data, ColumnRanges(data), scenario, magnitude,
                               seed);
}

ModificationSet GenerateModifications(const SparseDataset& data,
                                      const std::vector<Interval>& ranges,
                                      Scenario scenario, std::size_t magnitude,
                                      std::uint64_t seed) {
  const std::uint64_t n = data.num_rows();
  const std::uint64_t d = data.num_cols();
  std::uint64_t universe = 0;
  switch (scenario) {
    case Scenario::kSpot: universe = n * d; break;
    case Scenario::kInstance: universe = n; break;
    case Scenario::kFeature: universe = d; break;
  }
  if (magnitude > universe) {
    throw std::invalid_argument("magnitude exceeds the data dimensions");
  }
  if (ranges.size() != d) throw std::invalid_argument("ranges size");
  std::mt19937_64 rng(seed);
  const auto picks = SampleDistinct(universe, magnitude, rng);

  std::vector<CellEdit> edits;
  switch (scenario) {
    case Scenario::kSpot:
      for (const std::uint64_t c : picks) {
        const std::size_t j = c % d;
        edits.push_back({static_cast<std::size_t>(c / d), j, Draw(ranges[j], rng)});
      }
      break;
    case Scenario::kInstance:
      for (const std::uint64_t i : picks) {
        for (const Entry& e : data.row(i)) {
          edits.push_back({static_cast<std::size_t>(i), e.index,
                           Draw(ranges[e.index], rng)});
        }
      }
      break;
    case Scenario::kFeature:
      for (const std::uint64_t j : picks) {
        for (const Entry& e : data.col(j)) {
          edits.push_back({e.index, static_cast<std::size_t>(j),
                           Draw(ranges[j], rng)});
        }
      }
      break;
  }
  return ModificationSet(std::move(edits));
}

Baseline PrepareBaseline(SparseDataset train, SparseDataset test,
                         const Objective& obj, const TrainOptions& options) {
  Baseline b{std::move(train), std::move(test), obj, {}, {}, {}};
  b.solution = Train(b.train, obj, options);
  b.stats = BuildCachedStats(b.train, b.solution);
  b.column_ranges = ColumnRanges(b.train);
  return b;
}

TrialResult RunTrial(const Baseline& baseline, const ModificationSet& mods,
                     Scenario scenario, std::size_t magnitude,
                     std::uint64_t seed, const TrialOptions& options) {
  const Objective& obj = baseline.objective;
  const PrimalDualSolution& solution = baseline.solution;
  const CachedStats& stats = baseline.stats;
  const SparseDataset& test = baseline.test;

  TrialResult r;
  r.scenario = scenario;
  r.magnitude = magnitude;
  r.lambda = obj.lambda();
  r.seed = seed;
  r.num_edits = mods.size();

  const OverlayView view(baseline.train, mods);
  DeltaStats delta;
  double gap = 0.0;
  r.bound_time = MinTime(options.timing_repeats, [&] {
    delta = UpdateDeltaStats(stats, view, solution);
    gap = ComputeGap(stats, delta, obj);
    const BoundEngine engine(obj, stats, solution, delta, gap);
    const SparseBoundsReport sparse = engine.SparseReport(BoundCase::kCombined);
    static_cast<void>(sparse);
  });

  const BoundEngine engine(obj, stats, solution, delta, gap);
  const BoundsReport report = engine.Report(BoundCase::kCombined);
  r.gap = gap;
  r.determination_rate = DeterminationRate(test, report.w_bounds);
  r.drift_upper = ParamChangeUpper(solution.w, report.w_bounds);
  const std::vector<std::size_t> screened = ScreenSamples(engine);
  r.screened = screened.size();
  r.retrain_triggered = ShouldRetrain(RetrainPolicy(options.theta), r.drift_upper);

  const PartialPlan plan = MakePartialPlan(scenario, mods, options.budget);
  CheckSolution check;
  r.partial_time = MinTime(options.timing_repeats, [&] {
    check = RunPartialPlan(plan, view, obj, solution, stats, delta);
  });
  r.gap_tightened = TightenedGap(gap, check, stats.gap_floor);
  const BoundsReport tight =
      TightenedBounds(report, check, obj, stats, solution, delta);
  r.determination_rate_tightened = DeterminationRate(test, tight.w_bounds);
  r.drift_upper_tightened = ParamChangeUpper(solution.w, tight.w_bounds);
  const BoundEngine tight_engine(obj, stats, solution, delta, r.gap_tightened,
                                 &check.centers);
  std::vector<std::size_t> screened_tight = ScreenSamples(tight_engine);
  {
    std::vector<std::size_t> merged;
    std::set_union(screened.begin(), screened.end(), screened_tight.begin(),
                   screened_tight.end(), std::back_inserter(merged));
    screened_tight = std::move(merged);
  }
  r.screened_tightened = screened_tight.size();

  const SparseDataset modified = ApplyModifications(baseline.train, mods);
  PrimalDualSolution oracle;
  r.retrain_time = MinTime(options.timing_repeats, [&] {
    oracle = Train(modified, obj, options.retrain, &solution);
  });
  r.time_ratio = r.retrain_time > 0.0 ? r.bound_time / r.retrain_time : 0.0;
  r.converged = solution.converged && oracle.converged;

  const double oracle_radius = std::sqrt(2.0 * oracle.residual_gap / obj.lambda());
  double sq = 0.0;
  for (std::size_t j = 0; j < solution.w.size(); ++j) {
    const double diff = oracle.w[j] - solution.w[j];
    sq += diff * diff;
  }
  r.true_drift = std::sqrt(sq);

  std::size_t bad = 0;
  bad += LabelContradictions(test, report.w_bounds, oracle.w, oracle_radius);
  bad += LabelContradictions(test, tight.w_bounds, oracle.w, oracle_radius);
  if (r.true_drift - oracle_radius > r.drift_upper + 1e-12) ++bad;
  if (r.true_drift - oracle_radius > r.drift_upper_tightened + 1e-12) ++bad;
  for (const std::size_t i : screened_tight) {
    if (oracle.alpha[i] > 1e-9) ++bad;
  }
  r.contradictions = bad;
  return r;
}

std::vector<TrialResult> RunExperiment(const ExperimentConfig& config) {
  const SparseDataset data = NormalizeRows(LoadDataSource(config.data));
  auto [train, test] =
      SplitTrainTest(data, config.train_fraction, config.split_seed);

  TrainOptions train_options;
  train_options.tolerance = config.tolerance;
  train_options.max_epochs = config.max_epochs;

  std::map<double, Baseline> baselines;
  for (const double lambda : config.lambdas) {
    if (baselines.count(lambda)) continue;
    baselines.emplace(lambda, PrepareBaseline(train, test,
                                              Objective(config.gamma, lambda),
                                              train_options));
  }

  TrialOptions trial_options;
  trial_options.retrain = train_options;
  trial_options.budget = config.budget;
  trial_options.theta = config.theta;
  trial_options.timing_repeats = config.timing_repeats;

  const std::uint64_t n = train.num_rows();
  const std::uint64_t d = train.num_cols();
  std::vector<TrialResult> out;
  for (const Scenario scenario : config.scenarios) {
    const std::uint64_t limit = scenario == Scenario::kSpot       ? n * d
                                : scenario == Scenario::kInstance ? n
                                                                  : d;
    for (const std::size_t magnitude : config.magnitudes) {
      if (magnitude > limit) continue;
      for (const double lambda : config.lambdas) {
        const Baseline& baseline = baselines.at(lambda);
        for (const std::uint64_t seed : config.seeds) {
          const ModificationSet mods = GenerateModifications(
              baseline.train, baseline.column_ranges, scenario, magnitude, seed);
          out.push_back(
              RunTrial(baseline, mods, scenario, magnitude, seed, trial_options));
        }
      }
    }
  }
  return out;
}

std::string TrialsToCsv(const std::vector<TrialResult>& trials,
                        bool include_timing) {
  std::string out = "scenario,magnitude,lambda,seed,converged";
  for (const Field& f : Fields()) {
    if (f.timing && !include_timing) continue;
    out += ',';
    out += f.name;
  }
  out += '\n';
  for (const TrialResult& t : trials) {
    out += ScenarioName(t.scenario);
    out += ',' + std::to_string(t.magnitude);
    out += ',' + FormatDouble(t.lambda);
    out += ',' + std::to_string(t.seed);
    out += t.converged ? ",1" : ",0";
    for (const Field& f : Fields()) {
      if (f.timing && !include_timing) continue;
      out += ',' + FormatDouble(f.get(t));
    }
    out += '\n';
  }
  return out;
}

std::string AggregatesToJson(const std::vector<TrialResult>& trials,
                             bool include_timing) {
  struct Group {
    Scenario scenario;
    std::size_t magnitude;
    double lambda;
    std::vector<const TrialResult*> members;
    std::size_t excluded = 0;
  };
  std::vector<Group> groups;
  for (const TrialResult& t : trials) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.scenario == t.scenario && g.magnitude == t.magnitude &&
             g.lambda == t.lambda;
    });
    if (it == groups.end()) {
      groups.push_back({t.scenario, t.magnitude, t.lambda, {}, 0});
      it = groups.end() - 1;
    }
    if (t.converged) it->members.push_back(&t);
    else ++it->excluded;
  }

  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const Group& g : groups) {
    nlohmann::ordered_json entry;
    entry["scenario"] = ScenarioName(g.scenario);
    entry["magnitude"] = g.magnitude;
    entry["lambda"] = g.lambda;
    entry["trials"] = g.members.size();
    entry["excluded"] = g.excluded;
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    for (const Field& f : Fields()) {
      if (f.timing && !include_timing) continue;
      if (g.members.empty()) continue;
      double sum = 0.0;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const TrialResult* t : g.members) {
        const double v = f.get(*t);
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      metrics[f.name] = {{"mean", sum / static_cast<double>(g.members.size())},
                         {"min", lo},
                         {"max", hi}};
    }
    entry["metrics"] = std::move(metrics);
    out.push_back(std::move(entry));
  }
  return out.dump(2) + "\n";
}

void EmitTables(const std::vector<TrialResult>& trials, const std::string& dir,
                bool include_timing) {
  if (trials.empty()) throw std::invalid_argument("no trials to emit");
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  std::ofstream csv(root / "trials.csv", std::ios::binary);
  csv << TrialsToCsv(trials, include_timing);
  std::ofstream json(root / "aggregates.json", std::ios::binary);
  json << AggregatesToJson(trials, include_timing);
  if (!csv || !json) throw std::runtime_error("failed to write tables in " + dir);
}

}  // namespace deltasvm
