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

// End-to-end runs: grow the forest on the labeled set, build the specialist
// rows over the unlabeled set, estimate their correlation bounds, solve the
// game and score the unlabeled set. Labels present on the unlabeled examples
// are never used for fitting; they only feed the report.

#ifndef HEDGECLIPPER_PIPELINE_H_
#define HEDGECLIPPER_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "hedgeclipper/config.h"
#include "hedgeclipper/dataset.h"
#include "hedgeclipper/game.h"
#include "hedgeclipper/metrics.h"
#include "hedgeclipper/model.h"
#include "hedgeclipper/specialists.h"

namespace hedgeclipper {

struct RunReport {
  // Present only when every unlabeled example carries a label and both
  // classes occur.
  std::optional<double> auc;
  std::optional<double> base_rf_auc;
  std::optional<double> error;
  double game_value = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  // Factor applied to b to make the exact solve feasible; 1 when untouched.
  double b_scale = 1.0;
  int32_t num_labeled = 0;
  int32_t num_unlabeled = 0;
  int32_t forest_examples = 0;
  int32_t estimation_examples = 0;
  int32_t num_rows = 0;  // rows kept for the game
  int32_t num_tree_rows = 0;
  int32_t num_leaf_rows = 0;
  int32_t dropped_rows = 0;
  int64_t nnz = 0;
  int min_leaf = 0;
  uint64_t seed = 0;
  PipelineConfig config;

  nlohmann::json ToJson() const;
};

struct RunResult {
  Model model;
  RunReport report;
  GameSolution solution;
  // Majority-vote scores of the forest on the unlabeled set.
  std::vector<double> base_scores;
  // S before and after dropping rows without labeled coverage.
  SpecialistMatrix full_s;
  SpecialistMatrix s;
};

RunResult RunHedgeClipper(std::span<const Example> labeled,
                          std::span<const Example> unlabeled,
                          const PipelineConfig& config);

// Number of stored entries in the leaf rows of each tree.
std::vector<int64_t> LeafEntriesPerTree(const SpecialistMatrix& s,
                                        int32_t num_trees);

// Throws Inconsistent unless every tree's leaf rows hold exactly
// s.num_cols() entries.
void CheckLeafAccounting(const SpecialistMatrix& s, int32_t num_trees);

// Throws Inconsistent unless g is awake clipped to [-1, 1].
void CheckClipping(std::span<const double> awake, std::span<const double> g);

// Picks from config.alpha_grid by AUC of out-of-sample awake predictions on
// the out-of-bag part of a bootstrap draw of `labeled`. Ties keep the earlier
// grid entry; falls back to config.alpha when the holdout is single-class.
double SelectAlpha(std::span<const Example> labeled,
                   std::span<const Example> unlabeled,
                   const PipelineConfig& config);

// CSV `id,awake,label`, one line per example; the label column is empty for
// unlabeled input.
void ExportMargins(const Model& model, std::span<const Example> unlabeled,
                   std::ostream& out);
void ExportMargins(const Model& model, std::span<const Example> unlabeled,
                   const std::string& path);

struct SeedResult {
  uint64_t seed = 0;
  std::optional<double> hc_auc;
  std::optional<double> baserf_auc;
  std::optional<double> error;
  double game_value = 0.0;
};

struct ProtocolResult {
  std::vector<SeedResult> runs;
  MeanStd hc_auc;
  MeanStd baserf_auc;
  MeanStd error;
};

// For seeds base_seed, base_seed + 1, ...: draw m labeled examples from
// `pool`, treat the rest of the pool plus `extra_unlabeled` as U, and run.
// Every run also passes CheckLeafAccounting and CheckClipping.
ProtocolResult RunProtocol(std::span<const Example> pool,
                           std::span<const Example> extra_unlabeled, int64_t m,
                           int repeats, const PipelineConfig& config,
                           uint64_t base_seed);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_PIPELINE_H_
