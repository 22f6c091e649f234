// Copyright 2026 The HedgeClipper Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hedgeclipper/pipeline.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "hedgeclipper/error.h"
#include "hedgeclipper/estimation.h"
#include "hedgeclipper/forest.h"
#include "hedgeclipper/random.h"

namespace hedgeclipper {
namespace {

enum SeedStream : uint64_t {
  kForestStream = 1,
  kEstimationStream = 2,
  kSgdStream = 3,
  kTrainSplitStream = 4,
  kAlphaStream = 5,
};

// Everything up to (not including) the game solve.
struct Prepared {
  PipelineConfig config;  // resolved seeds and min_leaf
  Forest forest;
  SpecialistMatrix full_s;
  SpecialistMatrix s;
  CorrelationBounds bounds;
  int32_t forest_examples = 0;
  int32_t estimation_examples = 0;
};

void CheckInputs(std::span<const Example> labeled,
                 std::span<const Example> unlabeled) {
  if (labeled.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "labeled set is empty");
  }
  for (const Example& e : labeled) {
    if (!e.label) {
      throw Error(ErrorCode::kInvalidArgument,
                  "labeled set contains an unlabeled example");
    }
  }
  if (unlabeled.empty()) {
    throw Error(ErrorCode::kEmptyUnlabeled, "unlabeled set is empty");
  }
}

PipelineConfig Resolve(const PipelineConfig& config, size_t num_labeled) {
  PipelineConfig c = config;
  c.forest.seed = DeriveSeed(config.seed, kForestStream);
  c.estimation.seed = DeriveSeed(config.seed, kEstimationStream);
  c.sgd.seed = DeriveSeed(config.seed, kSgdStream);
  if (c.forest.min_leaf == 0) c.forest.min_leaf = num_labeled >= 1000 ? 10 : 4;
  return c;
}

Prepared Prepare(std::span<const Example> labeled,
                 std::span<const Example> unlabeled,
                 const PipelineConfig& resolved) {
  Prepared p;
  p.config = resolved;
  const size_t m = labeled.size();

  std::vector<Example> grow, estimate;
  std::span<const Example> grow_set = labeled, estimate_set = labeled;
  if (resolved.train_frac < 1.0 && m >= 2) {
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(DeriveSeed(resolved.seed, kTrainSplitStream));
    Shuffle(std::span<size_t>(order), rng);
    size_t k = static_cast<size_t>(
        std::llround(resolved.train_frac * static_cast<double>(m)));
    k = std::clamp<size_t>(k, 1, m - 1);
    std::sort(order.begin(), order.begin() + k);
    std::sort(order.begin() + k, order.end());
    for (size_t i = 0; i < m; ++i) {
      (i < k ? grow : estimate).push_back(labeled[order[i]]);
    }
    grow_set = grow;
    estimate_set = estimate;
  }
  p.forest_examples = static_cast<int32_t>(grow_set.size());
  p.estimation_examples = static_cast<int32_t>(estimate_set.size());

  const int32_t d =
      std::max(FeatureDimension(labeled), FeatureDimension(unlabeled));
  p.forest = TrainForest(grow_set, resolved.forest, std::max(d, 1));
  const auto rows = BuildRows(p.forest, unlabeled);
  p.full_s =
      SpecialistMatrix::Assemble(rows, static_cast<int32_t>(unlabeled.size()));
  p.bounds =
      EstimateB(p.forest, p.full_s.keys(), estimate_set, resolved.estimation);
  p.s = p.full_s.SelectRows(p.bounds.kept_rows);
  return p;
}

struct Solved {
  std::vector<double> sigma;
  std::vector<double> b;
  double b_scale = 1.0;
};

// The exact solver needs bounds some z in [-alpha, alpha]^n satisfies; when
// they are not, b is shrunk by the largest factor that restores this (less
// 1e-9 so the feasible set keeps an interior) and the factor is reported.
Solved Solve(const Prepared& p, double alpha) {
  Solved out{{}, p.bounds.b, 1.0};
  if (p.config.solver == Solver::kExact) {
    const double t = alpha * FeasibilityScale(p.s, out.b);
    if (t < 1.0) {
      out.b_scale = t * (1.0 - 1e-9);
      for (double& v : out.b) v *= out.b_scale;
    }
    out.sigma = ExactSolveSmall(p.s, out.b, alpha).sigma;
  } else {
    out.sigma = MinimizeSlack(p.s, out.b, alpha, p.config.sgd);
  }
  return out;
}

// Labels of the examples as +-1, or nothing if any is missing or only one
// class occurs.
std::optional<std::vector<int>> EvaluationLabels(
    std::span<const Example> examples) {
  std::vector<int> labels;
  labels.reserve(examples.size());
  bool pos = false, neg = false;
  for (const Example& e : examples) {
    if (!e.label) return std::nullopt;
    labels.push_back(*e.label > 0 ? 1 : -1);
    (*e.label > 0 ? pos : neg) = true;
  }
  if (!pos || !neg) return std::nullopt;
  return labels;
}

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json RunReport::ToJson() const {
  nlohmann::json j;
  j["auc"] = OptionalJson(auc);
  j["base_rf_auc"] = OptionalJson(base_rf_auc);
  j["error"] = OptionalJson(error);
  j["game_value"] = game_value;
  j["gamma"] = gamma;
  j["alpha"] = alpha;
  j["b_scale"] = b_scale;
  j["num_labeled"] = num_labeled;
  j["num_unlabeled"] = num_unlabeled;
  j["forest_examples"] = forest_examples;
  j["estimation_examples"] = estimation_examples;
  j["num_rows"] = num_rows;
  j["num_tree_rows"] = num_tree_rows;
  j["num_leaf_rows"] = num_leaf_rows;
  j["dropped_rows"] = dropped_rows;
  j["nnz"] = nnz;
  j["min_leaf"] = min_leaf;
  j["seed"] = seed;
  j["config"] = hedgeclipper::ToJson(config);
  return j;
}

std::vector<int64_t> LeafEntriesPerTree(const SpecialistMatrix& s,
                                        int32_t num_trees) {
  std::vector<int64_t> entries(num_trees, 0);
  for (int32_t i = 0; i < s.num_rows(); ++i) {
    const RowKey& key = s.keys()[i];
    if (key.kind != RowKind::kLeaf) continue;
    if (key.tree < 0 || key.tree >= num_trees) {
      throw Error(ErrorCode::kInconsistent, "leaf row of an unknown tree");
    }
    entries[key.tree] += static_cast<int64_t>(s.RowColumns(i).size());
  }
  return entries;
}

void CheckLeafAccounting(const SpecialistMatrix& s, int32_t num_trees) {
  const auto entries = LeafEntriesPerTree(s, num_trees);
  for (int32_t t = 0; t < num_trees; ++t) {
    if (entries[t] != s.num_cols()) {
      throw Error(ErrorCode::kInconsistent,
                  "leaf rows of tree " + std::to_string(t) + " store " +
                      std::to_string(entries[t]) + " entries, expected " +
                      std::to_string(s.num_cols()));
    }
  }
}

void CheckClipping(std::span<const double> awake, std::span<const double> g) {
  if (awake.size() != g.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "awake and g differ in length");
  }
  for (size_t j = 0; j < g.size(); ++j) {
    const double a = awake[j];
    const bool in_range = g[j] >= -1.0 && g[j] <= 1.0;
    const bool clipped =
        std::abs(a) >= 1.0 ? g[j] == (a > 0 ? 1.0 : -1.0) : g[j] == a;
    if (!in_range || !clipped) {
      throw Error(ErrorCode::kInconsistent,
                  "prediction " + std::to_string(j) + " is not clipped");
    }
  }
}

double SelectAlpha(std::span<const Example> labeled,
                   std::span<const Example> unlabeled,
                   const PipelineConfig& config) {
  CheckInputs(labeled, unlabeled);
  const size_t m = labeled.size();
  Rng rng(DeriveSeed(config.seed, kAlphaStream));
  std::vector<char> in_bag(m, 0);
  for (size_t i = 0; i < m; ++i) in_bag[UniformIndex(rng, m)] = 1;
  std::vector<Example> bag, holdout;
  for (size_t i = 0; i < m; ++i) {
    (in_bag[i] ? bag : holdout).push_back(labeled[i]);
  }
  const auto holdout_labels = EvaluationLabels(holdout);
  if (!holdout_labels) return config.alpha;

  PipelineConfig inner = config;
  inner.seed = DeriveSeed(config.seed, kAlphaStream + 100);
  const Prepared p = Prepare(bag, unlabeled, Resolve(inner, bag.size()));
  Model model;
  model.forest = p.forest;
  model.rows = p.s.keys();
  model.row_scale = p.s.row_scale();
  model.b = p.bounds.b;
  model.num_unlabeled = static_cast<int32_t>(unlabeled.size());

  double best_alpha = config.alpha;
  double best_auc = -1.0;
  for (double alpha : config.alpha_grid) {
    Solved solved = Solve(p, alpha);
    model.sigma = std::move(solved.sigma);
    model.b = std::move(solved.b);
    model.alpha = alpha;
    std::vector<double> scores;
    for (const Example& e : holdout) scores.push_back(model.Awake(e));
    const double auc = Auc(scores, *holdout_labels);
    if (auc > best_auc) {
      best_auc = auc;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

RunResult RunHedgeClipper(std::span<const Example> labeled,
                          std::span<const Example> unlabeled,
                          const PipelineConfig& config) {
  Validate(config);
  CheckInputs(labeled, unlabeled);
  PipelineConfig resolved = Resolve(config, labeled.size());
  if (config.alpha_auto) {
    resolved.alpha = SelectAlpha(labeled, unlabeled, config);
  }
  Prepared p = Prepare(labeled, unlabeled, resolved);

  RunResult result;
  Solved solved = Solve(p, resolved.alpha);
  result.solution =
      MakeSolution(p.s, solved.b, std::move(solved.sigma), resolved.alpha);
  CheckClipping(result.solution.awake, result.solution.g);

  Model& model = result.model;
  model.forest = p.forest;
  model.rows = p.s.keys();
  model.row_scale = p.s.row_scale();
  model.b = solved.b;
  model.sigma = result.solution.sigma;
  model.alpha = resolved.alpha;
  model.num_unlabeled = static_cast<int32_t>(unlabeled.size());
  model.config = resolved;

  result.base_scores.reserve(unlabeled.size());
  for (const Example& e : unlabeled) {
    result.base_scores.push_back(MajorityVoteScore(p.forest, e));
  }

  RunReport& r = result.report;
  if (const auto labels = EvaluationLabels(unlabeled)) {
    r.auc = Auc(result.solution.awake, *labels);
    r.base_rf_auc = Auc(result.base_scores, *labels);
    r.error = ClassificationError(result.solution.g, *labels);
  }
  r.game_value = result.solution.value;
  r.gamma = result.solution.gamma;
  r.alpha = resolved.alpha;
  r.b_scale = solved.b_scale;
  r.num_labeled = static_cast<int32_t>(labeled.size());
  r.num_unlabeled = static_cast<int32_t>(unlabeled.size());
  r.forest_examples = p.forest_examples;
  r.estimation_examples = p.estimation_examples;
  r.num_rows = p.s.num_rows();
  for (const RowKey& key : p.s.keys()) {
    ++(key.kind == RowKind::kTree ? r.num_tree_rows : r.num_leaf_rows);
  }
  r.dropped_rows = p.full_s.num_rows() - p.s.num_rows();
  r.nnz = static_cast<int64_t>(p.s.nnz());
  r.min_leaf = resolved.forest.min_leaf;
  r.seed = config.seed;
  r.config = resolved;

  result.full_s = std::move(p.full_s);
  result.s = std::move(p.s);
  return result;
}

void ExportMargins(const Model& model, std::span<const Example> unlabeled,
                   std::ostream& out) {
  out << "id,awake,label\n";
  for (size_t j = 0; j < unlabeled.size(); ++j) {
    const Example& e = unlabeled[j];
    out << j << ',' << FormatDouble(model.Awake(e)) << ',';
    if (e.label) out << (*e.label > 0 ? "+1" : "-1");
    out << '\n';
  }
}

void ExportMargins(const Model& model, std::span<const Example> unlabeled,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  ExportMargins(model, unlabeled, out);
  if (!out) throw Error(ErrorCode::kIo, "short write to '" + path + "'");
}

ProtocolResult RunProtocol(std::span<const Example> pool,
                           std::span<const Example> extra_unlabeled, int64_t m,
                           int repeats, const PipelineConfig& config,
                           uint64_t base_seed) {
  if (repeats < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--repeats must be at least 1");
  }
  ProtocolResult out;
  std::vector<double> hc, base, err;
  for (int r = 0; r < repeats; ++r) {
    const uint64_t seed = base_seed + static_cast<uint64_t>(r);
    DatasetSplit split = MakeSplit(pool, m, seed);
    split.unlabeled.insert(split.unlabeled.end(), extra_unlabeled.begin(),
                           extra_unlabeled.end());
    PipelineConfig c = config;
    c.seed = seed;
    const RunResult run = RunHedgeClipper(split.labeled, split.unlabeled, c);
    CheckLeafAccounting(run.full_s, static_cast<int32_t>(run.model.forest.size()));

    SeedResult s;
    s.seed = seed;
    s.hc_auc = run.report.auc;
    s.baserf_auc = run.report.base_rf_auc;
    s.error = run.report.error;
    s.game_value = run.report.game_value;
    if (s.hc_auc) hc.push_back(*s.hc_auc);
    if (s.baserf_auc) base.push_back(*s.baserf_auc);
    if (s.error) err.push_back(*s.error);
    out.runs.push_back(s);
  }
  out.hc_auc = Summarize(hc);
  out.baserf_auc = Summarize(base);
  out.error = Summarize(err);
  return out;
}

}  // namespace hedgeclipper
