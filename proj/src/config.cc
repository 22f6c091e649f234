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

#include "hedgeclipper/config.h"

#include <cmath>
#include <string>

#include "hedgeclipper/error.h"

namespace hedgeclipper {
namespace {

const char* MethodName(BoundMethod method) {
  switch (method) {
    case BoundMethod::kBootstrap: return "bootstrap";
    case BoundMethod::kHoeffding: return "hoeffding";
    case BoundMethod::kExact: return "exact";
  }
  return "bootstrap";
}

BoundMethod MethodFromName(const std::string& name) {
  if (name == "bootstrap") return BoundMethod::kBootstrap;
  if (name == "hoeffding") return BoundMethod::kHoeffding;
  if (name == "exact") return BoundMethod::kExact;
  throw Error(ErrorCode::kBadFormat, "unknown bound method '" + name + "'");
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, message);
}

}  // namespace

void Validate(const PipelineConfig& config) {
  Require(config.forest.num_trees >= 1, "--trees must be at least 1");
  Require(config.forest.min_leaf >= 0, "--min-leaf must be nonnegative");
  Require(config.forest.max_features >= 0, "max_features must be nonnegative");
  Require(config.alpha > 0 && std::isfinite(config.alpha),
          "--alpha must be positive (alpha = 0 makes the slack unbounded)");
  for (double a : config.alpha_grid) {
    Require(a > 0 && std::isfinite(a), "alpha grid values must be positive");
  }
  Require(!config.alpha_auto || !config.alpha_grid.empty(),
          "alpha grid is empty");
  Require(config.train_frac > 0 && config.train_frac <= 1,
          "--train-frac must be in (0, 1]");
  Require(config.sgd.batch_size >= 1, "--batch must be at least 1");
  Require(config.sgd.epochs >= 1, "--epochs must be at least 1");
  Require(config.sgd.step0 >= 0 && std::isfinite(config.sgd.step0),
          "--step0 must be nonnegative (0 = automatic)");
  Require(config.sgd.tolerance > 0, "SGD tolerance must be positive");
  const EstimationConfig& e = config.estimation;
  Require(e.epsilon_b > 0 && e.epsilon_b <= 1, "epsilon_b must be in (0, 1]");
  Require(e.delta > 0 && e.delta < 1, "--delta must be in (0, 1)");
  Require(e.resamples >= 1, "--boot-resamples must be at least 1");
  Require(e.quantile >= 0 && e.quantile <= 1,
          "--boot-quantile must be in [0, 1]");
}

nlohmann::json ToJson(const PipelineConfig& config) {
  nlohmann::json j;
  j["forest"] = {{"num_trees", config.forest.num_trees},
                 {"min_leaf", config.forest.min_leaf},
                 {"max_features", config.forest.max_features},
                 {"bootstrap", config.forest.bootstrap},
                 {"seed", config.forest.seed}};
  j["estimation"] = {{"method", MethodName(config.estimation.method)},
                     {"delta", config.estimation.delta},
                     {"resamples", config.estimation.resamples},
                     {"quantile", config.estimation.quantile},
                     {"epsilon_b", config.estimation.epsilon_b},
                     {"seed", config.estimation.seed}};
  j["sgd"] = {{"batch_size", config.sgd.batch_size},
              {"epochs", config.sgd.epochs},
              {"step0", config.sgd.step0},
              {"tolerance", config.sgd.tolerance},
              {"seed", config.sgd.seed}};
  j["alpha"] = config.alpha;
  j["alpha_auto"] = config.alpha_auto;
  j["alpha_grid"] = config.alpha_grid;
  j["train_frac"] = config.train_frac;
  j["solver"] = config.solver == Solver::kExact ? "exact" : "sgd";
  j["seed"] = config.seed;
  return j;
}

PipelineConfig ConfigFromJson(const nlohmann::json& j) {
  try {
    PipelineConfig c;
    const auto& f = j.at("forest");
    c.forest.num_trees = f.at("num_trees").get<int>();
    c.forest.min_leaf = f.at("min_leaf").get<int>();
    c.forest.max_features = f.at("max_features").get<int>();
    c.forest.bootstrap = f.at("bootstrap").get<bool>();
    c.forest.seed = f.at("seed").get<uint64_t>();
    const auto& e = j.at("estimation");
    c.estimation.method = MethodFromName(e.at("method").get<std::string>());
    c.estimation.delta = e.at("delta").get<double>();
    c.estimation.resamples = e.at("resamples").get<int>();
    c.estimation.quantile = e.at("quantile").get<double>();
    c.estimation.epsilon_b = e.at("epsilon_b").get<double>();
    c.estimation.seed = e.at("seed").get<uint64_t>();
    const auto& s = j.at("sgd");
    c.sgd.batch_size = s.at("batch_size").get<int>();
    c.sgd.epochs = s.at("epochs").get<int>();
    c.sgd.step0 = s.at("step0").get<double>();
    c.sgd.tolerance = s.at("tolerance").get<double>();
    c.sgd.seed = s.at("seed").get<uint64_t>();
    c.alpha = j.at("alpha").get<double>();
    c.alpha_auto = j.at("alpha_auto").get<bool>();
    c.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    c.train_frac = j.at("train_frac").get<double>();
    c.solver = j.at("solver").get<std::string>() == "exact" ? Solver::kExact
                                                            : Solver::kSgd;
    c.seed = j.at("seed").get<uint64_t>();
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kBadFormat, std::string("config: ") + ex.what());
  }
}

}  // namespace hedgeclipper
