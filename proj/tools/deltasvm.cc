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

// deltasvm command-line tool.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "deltasvm/decisions.h"
#include "deltasvm/delta_bounds.h"
#include "deltasvm/experiment.h"
#include "deltasvm/modification.h"
#include "deltasvm/objectives.h"
#include "deltasvm/partial_opt.h"
#include "deltasvm/solver.h"
#include "deltasvm/sparse_data.h"
#include "json.hpp"

namespace deltasvm {
namespace {

using nlohmann::json;

struct Flags {
  std::string data;
  std::string test;
  std::vector<double> lambdas{0.001, 0.01, 0.1, 1.0};
  double gamma = 0.5;
  std::vector<std::string> scenarios{"spot"};
  std::vector<std::size_t> magnitudes{1, 100, 10000};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string out = ".";
  double tolerance = 1e-9;
  double theta = 0.1;
  std::size_t max_epochs = 1000;
  bool normalize = false;
  std::string stats_path;
  std::string mods_path;
  std::string bounds_path;
  std::string bound_case = "combined";
  bool partial = false;
  bool sparse = false;
  double train_fraction = 0.8;
  std::size_t timing_repeats = 3;
  bool no_timing = false;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string OutPath(const Flags& f, const char* name) {
  return (std::filesystem::path(f.out) / name).string();
}

SparseDataset LoadData(const std::string& source, bool normalize) {
  if (source.empty()) throw std::invalid_argument("--data is required");
  SparseDataset data = LoadDataSource(source);
  return normalize ? NormalizeRows(data) : data;
}

BoundCase BoundCaseFromName(const std::string& name) {
  for (BoundCase c : {BoundCase::kDual, BoundCase::kPrimal, BoundCase::kCombined}) {
    if (name == BoundCaseName(c)) return c;
  }
  throw std::invalid_argument("unknown bound case: " + name);
}

// stats.json: the objective, the trained pair and its cached statistics.
struct Model {
  Objective objective;
  PrimalDualSolution solution;
  CachedStats stats;
};

std::string ModelToJson(const Model& m) {
  json j;
  j["version"] = 1;
  j["objective"] = json::parse(ObjectiveToJson(m.objective));
  j["epochs"] = m.solution.epochs;
  j["converged"] = m.solution.converged;
  j["solution"] = json::parse(SolutionToJson(m.solution, m.stats));
  return j.dump() + "\n";
}

Model LoadModel(const std::string& path) {
  const json j = json::parse(ReadFile(path));
  if (j.at("version").get<int>() != 1) {
    throw std::invalid_argument("unsupported stats.json version");
  }
  Model m;
  m.objective = ObjectiveFromJson(j.at("objective").dump());
  SolutionFromJson(j.at("solution").dump(), m.solution, m.stats);
  m.solution.epochs = j.at("epochs").get<std::size_t>();
  m.solution.converged = j.at("converged").get<bool>();
  return m;
}

std::string StatsPath(const Flags& f) {
  return f.stats_path.empty() ? OutPath(f, "stats.json") : f.stats_path;
}

void CheckShape(const SparseDataset& data, const Model& m) {
  if (data.num_rows() != m.stats.num_rows() || data.num_cols() != m.stats.num_cols()) {
    throw std::invalid_argument("--data does not match the trained statistics");
  }
}

json Summary(const Model& m) {
  std::size_t support = 0, nonzero_w = 0;
  for (double a : m.solution.alpha) support += a > 0.0;
  for (double w : m.solution.w) nonzero_w += w != 0.0;
  return {{"rows", m.stats.num_rows()},
          {"cols", m.stats.num_cols()},
          {"lambda", m.objective.lambda()},
          {"gamma", m.objective.gamma()},
          {"epochs", m.solution.epochs},
          {"converged", m.solution.converged},
          {"residual_gap", m.solution.residual_gap},
          {"gap_floor", m.stats.gap_floor},
          {"support_vectors", support},
          {"nonzero_weights", nonzero_w}};
}

int CmdTrain(const Flags& f) {
  const SparseDataset data = LoadData(f.data, f.normalize);
  Model m;
  m.objective = Objective(f.gamma, f.lambdas.front());
  TrainOptions opt;
  opt.tolerance = f.tolerance;
  opt.max_epochs = f.max_epochs;
  m.solution = Train(data, m.objective, opt);
  m.stats = BuildCachedStats(data, m.solution);
  WriteFile(OutPath(f, "stats.json"), ModelToJson(m));
  std::cout << Summary(m).dump() << "\n";
  return m.solution.converged ? 0 : 2;
}

int CmdStats(const Flags& f) {
  std::cout << Summary(LoadModel(StatsPath(f))).dump() << "\n";
  return 0;
}

int CmdModify(const Flags& f) {
  const SparseDataset data = LoadData(f.data, f.normalize);
  const auto mods = GenerateModifications(data, ScenarioFromName(f.scenarios.front()),
                                          f.magnitudes.front(), f.seeds.front());
  WriteFile(OutPath(f, "modifications.json"), ModificationsToJson(mods) + "\n");
  std::cout << json{{"edits", mods.size()},
                    {"rows", mods.touched_rows().size()},
                    {"cols", mods.touched_cols().size()}}
                   .dump()
            << "\n";
  return 0;
}

// The pieces every bound-derived command needs.
struct BoundContext {
  SparseDataset data;
  Model model;
  ModificationSet mods;
  DeltaStats delta;
  double gap = 0.0;
};

BoundContext MakeContext(const Flags& f) {
  BoundContext c;
  c.data = LoadData(f.data, f.normalize);
  c.model = LoadModel(StatsPath(f));
  CheckShape(c.data, c.model);
  const std::string mods_path =
      f.mods_path.empty() ? OutPath(f, "modifications.json") : f.mods_path;
  c.mods = ModificationsFromJson(ReadFile(mods_path));
  c.delta = UpdateDeltaStats(c.model.stats, OverlayView(c.data, c.mods), c.model.solution);
  c.gap = ComputeGap(c.model.stats, c.delta, c.model.objective);
  return c;
}

int CmdBounds(const Flags& f) {
  const BoundContext c = MakeContext(f);
  const Model& m = c.model;
  const BoundEngine engine(m.objective, m.stats, m.solution, c.delta, c.gap);
  const BoundCase bc = BoundCaseFromName(f.bound_case);
  std::string text;
  json summary = {{"edits", c.mods.size()}, {"gap", c.gap}};
  if (f.partial) {
    const OverlayView view(c.data, c.mods);
    const auto plan = MakePartialPlan(ScenarioFromName(f.scenarios.front()), c.mods);
    const auto check = RunPartialPlan(plan, view, m.objective, m.solution, m.stats, c.delta);
    const auto tight = TightenedBounds(engine.Report(bc), check, m.objective, m.stats,
                                       m.solution, c.delta);
    summary["gap_tightened"] = tight.gap;
    text = BoundsReportToJson(tight);
  } else if (f.sparse) {
    text = SparseBoundsReportToJson(engine.SparseReport(bc));
  } else {
    text = BoundsReportToJson(engine.Report(bc));
  }
  WriteFile(OutPath(f, "bounds.json"), text + "\n");
  std::cout << summary.dump() << "\n";
  return 0;
}

BoundsReport LoadBounds(const Flags& f) {
  const std::string path = f.bounds_path.empty() ? OutPath(f, "bounds.json") : f.bounds_path;
  return BoundsReportFromJson(ReadFile(path));
}

int CmdClassify(const Flags& f) {
  const BoundsReport report = LoadBounds(f);
  const SparseDataset test = LoadData(f.test.empty() ? f.data : f.test, f.normalize);
  if (test.num_cols() > report.w_bounds.size()) {
    throw std::invalid_argument("test data has more columns than the bounds");
  }
  for (std::size_t i = 0; i < test.num_rows(); ++i) {
    std::cout << VerdictToJsonLine(i, Classify(test.row(i), report.w_bounds))
              << "\n";
  }
  return 0;
}

int CmdScreen(const Flags& f) {
  const BoundContext c = MakeContext(f);
  const Model& m = c.model;
  const BoundEngine engine(m.objective, m.stats, m.solution, c.delta, c.gap);
  std::cout << json{{"gap", c.gap}, {"screened", ScreenSamples(engine)}}.dump() << "\n";
  return 0;
}

int CmdDrift(const Flags& f) {
  const Model m = LoadModel(StatsPath(f));
  const BoundsReport report = LoadBounds(f);
  const double up = ParamChangeUpper(m.solution.w, report.w_bounds);
  std::cout << json{{"drift_upper", up},
                    {"theta", f.theta},
                    {"retrain", ShouldRetrain(RetrainPolicy(f.theta), up)}}
                   .dump()
            << "\n";
  return 0;
}

int CmdExperiment(const Flags& f) {
  ExperimentConfig cfg;
  if (!f.data.empty()) cfg.data = f.data;
  cfg.lambdas = f.lambdas;
  cfg.gamma = f.gamma;
  cfg.scenarios.clear();
  for (const auto& s : f.scenarios) cfg.scenarios.push_back(ScenarioFromName(s));
  cfg.magnitudes = f.magnitudes;
  cfg.seeds = f.seeds;
  cfg.train_fraction = f.train_fraction;
  cfg.tolerance = f.tolerance;
  cfg.max_epochs = f.max_epochs;
  cfg.theta = f.theta;
  cfg.timing_repeats = f.timing_repeats;
  const auto trials = RunExperiment(cfg);
  EmitTables(trials, f.out, !f.no_timing);
  std::size_t excluded = 0, contradictions = 0;
  for (const auto& t : trials) {
    excluded += !t.converged;
    contradictions += t.contradictions;
  }
  std::cout << json{{"trials", trials.size()},
                    {"excluded", excluded},
                    {"contradictions", contradictions},
                    {"out", f.out}}
                   .dump()
            << "\n";
  return contradictions == 0 ? 0 : 3;
}

}  // namespace
}  // namespace deltasvm

int main(int argc, char** argv) {
  using deltasvm::Flags;
  Flags f;
  CLI::App app{"Certified bounds for sparse SVMs after data modifications"};
  app.require_subcommand(1);

  auto data = [&](CLI::App* s) {
    s->add_option("--data", f.data, "LIBSVM path or synthetic:n,d,density[,seed]");
    s->add_flag("--normalize", f.normalize, "Scale rows to unit L2 norm");
  };
  auto out = [&](CLI::App* s) {
    s->add_option("--out", f.out, "Output directory")->capture_default_str();
  };
  auto stats = [&](CLI::App* s) {
    s->add_option("--stats", f.stats_path, "stats.json (default <out>/stats.json)");
  };
  auto mods = [&](CLI::App* s) {
    s->add_option("--mods", f.mods_path,
                  "modifications.json (default <out>/modifications.json)");
  };
  auto bounds = [&](CLI::App* s) {
    s->add_option("--bounds", f.bounds_path, "bounds.json (default <out>/bounds.json)");
  };
  auto scenario = [&](CLI::App* s) {
    s->add_option("--scenario", f.scenarios, "spot, instance or feature")
        ->delimiter(',')
        ->check(CLI::IsMember({"spot", "instance", "feature"}));
  };
  auto theta = [&](CLI::App* s) {
    s->add_option("--theta", f.theta, "Retrain threshold on the drift bound")
        ->capture_default_str();
  };
  auto solver = [&](CLI::App* s) {
    s->add_option("--gamma", f.gamma, "Smoothing of the hinge")->capture_default_str();
    s->add_option("--tolerance", f.tolerance, "Relative duality-gap tolerance")
        ->capture_default_str();
    s->add_option("--max-epochs", f.max_epochs)->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "Train and write stats.json");
  data(train);
  out(train);
  solver(train);
  train->add_option("--lambda", f.lambdas, "Regularization (first value is used)")
      ->delimiter(',');

  auto* st = app.add_subcommand("stats", "Summarize stats.json");
  out(st);
  stats(st);

  auto* modify = app.add_subcommand("modify", "Sample a modification set");
  data(modify);
  out(modify);
  scenario(modify);
  modify->add_option("--magnitude", f.magnitudes, "|M|, rows or columns")->delimiter(',');
  modify->add_option("--seeds", f.seeds, "Sampling seed (first value is used)")
      ->delimiter(',');

  auto* bnd = app.add_subcommand("bounds", "Certified intervals; writes bounds.json");
  data(bnd);
  out(bnd);
  stats(bnd);
  mods(bnd);
  scenario(bnd);
  bnd->add_option("--case", f.bound_case, "dual, primal or combined")
      ->check(CLI::IsMember({"dual", "primal", "combined"}))
      ->capture_default_str();
  bnd->add_flag("--partial", f.partial, "Tighten with partial optimization");
  bnd->add_flag("--sparse", f.sparse, "Only coordinates whose intervals differ");

  auto* cls = app.add_subcommand("classify", "Certified labels from bounds.json");
  data(cls);
  out(cls);
  bounds(cls);
  cls->add_option("--test", f.test, "Rows to classify (default --data)");

  auto* scr = app.add_subcommand("screen", "Rows certified to leave the support set");
  data(scr);
  out(scr);
  stats(scr);
  mods(scr);

  auto* drf = app.add_subcommand("drift", "Upper bound on ||w* - w^|| and retrain flag");
  out(drf);
  stats(drf);
  bounds(drf);
  theta(drf);

  auto* exp = app.add_subcommand("experiment", "Run the trial grid; writes tables");
  data(exp);
  out(exp);
  solver(exp);
  scenario(exp);
  theta(exp);
  exp->add_option("--lambda", f.lambdas, "Lambda grid")->delimiter(',');
  exp->add_option("--magnitude", f.magnitudes, "Magnitude grid")->delimiter(',');
  exp->add_option("--seeds", f.seeds, "Trial seeds")->delimiter(',');
  exp->add_option("--train-fraction", f.train_fraction)->capture_default_str();
  exp->add_option("--timing-repeats", f.timing_repeats)->capture_default_str();
  exp->add_flag("--no-timing", f.no_timing, "Omit timing columns (byte-stable output)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) return deltasvm::CmdTrain(f);
    if (*st) return deltasvm::CmdStats(f);
    if (*modify) return deltasvm::CmdModify(f);
    if (*bnd) return deltasvm::CmdBounds(f);
    if (*cls) return deltasvm::CmdClassify(f);
    if (*scr) return deltasvm::CmdScreen(f);
    if (*drf) return deltasvm::CmdDrift(f);
    if (*exp) return deltasvm::CmdExperiment(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
