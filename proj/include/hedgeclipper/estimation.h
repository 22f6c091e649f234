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

// Lower bounds b_S on each row's correlation with the true labels,
// restricted to the examples on which the row is awake, estimated from
// labeled data.

#ifndef HEDGECLIPPER_ESTIMATION_H_
#define HEDGECLIPPER_ESTIMATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hedgeclipper/dataset.h"
#include "hedgeclipper/forest.h"
#include "hedgeclipper/specialists.h"

namespace hedgeclipper {

enum class BoundMethod {
  kBootstrap,
  kHoeffding,
  // Plain empirical correlation with no deviation penalty. Meant for test
  // fixtures where the "labeled" set is the true labeling of U.
  kExact,
};

struct EstimationConfig {
  BoundMethod method = BoundMethod::kBootstrap;
  double delta = 0.05;     // Hoeffding confidence
  int resamples = 100;     // bootstrap resamples B
  double quantile = 0.10;  // bootstrap lower quantile
  double epsilon_b = 1e-3;
  uint64_t seed = 0;
};

struct AwakeCorrelation {
  double correlation = 0.0;
  int32_t count = 0;
};

struct CorrelationBounds {
  std::vector<double> b;
  std::vector<int32_t> awake_counts;
  std::vector<double> empirical;
  // Indices (into the input rows) of the rows that survived, ascending;
  // b[k] belongs to input row kept_rows[k].
  std::vector<int32_t> kept_rows;
  EstimationConfig config;
};

// Mean of h_i(x) * y over the labeled examples on which the row is awake.
// Returns nullopt (drop the row) when the row is awake on none of them.
std::optional<AwakeCorrelation> EmpiricalAwakeCorrelation(
    std::span<const double> awake_products);
std::optional<AwakeCorrelation> EmpiricalAwakeCorrelation(
    const Forest& forest, const RowKey& key, std::span<const Example> labeled);

// Per row, the products h_i(x) * y on the labeled examples where it is awake.
std::vector<std::vector<double>> AwakeProducts(
    const Forest& forest, std::span<const RowKey> keys,
    std::span<const Example> labeled);

double HoeffdingPenalty(int32_t count, int32_t num_rows, double delta);

// Bounds are clamped to [epsilon_b, 1]. Rows with no awake labeled example
// are dropped; EstimationFailed if none remain. Bootstrap resampling for row
// i uses the stream DeriveSeed(config.seed, i).
CorrelationBounds EstimateBounds(
    std::span<const std::vector<double>> awake_products,
    const EstimationConfig& config);

CorrelationBounds EstimateB(const Forest& forest, std::span<const RowKey> keys,
                            std::span<const Example> labeled,
                            const EstimationConfig& config);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_ESTIMATION_H_
