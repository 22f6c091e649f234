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

#ifndef HEDGECLIPPER_CONFIG_H_
#define HEDGECLIPPER_CONFIG_H_

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "hedgeclipper/estimation.h"
#include "hedgeclipper/forest.h"
#include "hedgeclipper/game.h"

namespace hedgeclipper {

enum class Solver { kSgd, kExact };

// Everything that determines a pipeline run besides the data. The seeds
// inside the sub-configs are overwritten with streams derived from `seed`.
struct PipelineConfig {
  // forest.min_leaf == 0 selects 10 with >= 1000 labeled examples, else 4.
  ForestConfig forest{.num_trees = 100, .min_leaf = 0};
  EstimationConfig estimation;
  SgdConfig sgd;
  double alpha = 1.0;
  // Pick alpha from alpha_grid by AUC on a bootstrap holdout of the labels.
  bool alpha_auto = false;
  std::vector<double> alpha_grid = {0.3, 1.0, 3.0};
  // Fraction of the labeled set used to grow the forest; the rest estimates
  // b. A value of 1 uses every labeled example for both.
  double train_frac = 0.5;
  Solver solver = Solver::kSgd;
  uint64_t seed = 0;
};

void Validate(const PipelineConfig& config);

nlohmann::json ToJson(const PipelineConfig& config);
PipelineConfig ConfigFromJson(const nlohmann::json& json);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_CONFIG_H_
