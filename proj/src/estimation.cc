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

#include "hedgeclipper/estimation.h"

#include <algorithm>
#include <cmath>

#include "hedgeclipper/error.h"
#include "hedgeclipper/random.h"

namespace hedgeclipper {
namespace {

double Clamp(double v, double lo) { return std::clamp(v, lo, 1.0); }

// Linear interpolation between order statistics (the usual "type 7"
// definition), so the result lies within [min, max] of the sample.
double Quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double BootstrapBound(std::span<const double> products, int resamples,
                      double quantile, Rng& rng) {
  const size_t m = products.size();
  std::vector<double> means(resamples);
  for (int r = 0; r < resamples; ++r) {
    double sum = 0.0;
    for (size_t k = 0; k < m; ++k) sum += products[UniformIndex(rng, m)];
    means[r] = sum / static_cast<double>(m);
  }
  return Quantile(std::move(means), quantile);
}

void Validate(const EstimationConfig& config) {
  if (!(config.epsilon_b > 0 && config.epsilon_b <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon_b must be in (0, 1]");
  }
  if (config.method == BoundMethod::kHoeffding &&
      !(config.delta > 0 && config.delta < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be in (0, 1)");
  }
  if (config.method == BoundMethod::kBootstrap &&
      (config.resamples < 1 || !(config.quantile >= 0 && config.quantile <= 1))) {
    throw Error(ErrorCode::kInvalidArgument,
                "bootstrap needs resamples >= 1 and quantile in [0, 1]");
  }
}

}  // namespace

std::optional<AwakeCorrelation> EmpiricalAwakeCorrelation(
    std::span<const double> awake_products) {
  if (awake_products.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : awake_products) sum += v;
  return AwakeCorrelation{sum / static_cast<double>(awake_products.size()),
                          static_cast<int32_t>(awake_products.size())};
}

std::optional<AwakeCorrelation> EmpiricalAwakeCorrelation(
    const Forest& forest, const RowKey& key, std::span<const Example> labeled) {
  RowKey keys[] = {key};
  return EmpiricalAwakeCorrelation(AwakeProducts(forest, keys, labeled)[0]);
}

std::vector<std::vector<double>> AwakeProducts(
    const Forest& forest, std::span<const RowKey> keys,
    std::span<const Example> labeled) {
  // Route every labeled example once per tree.
  std::vector<std::vector<NodeId>> routes(forest.size());
  for (size_t t = 0; t < forest.size(); ++t) {
    routes[t].reserve(labeled.size());
    for (const Example& e : labeled) {
      if (!e.label) {
        throw Error(ErrorCode::kInvalidArgument,
                    "bound estimation requires labeled examples");
      }
      routes[t].push_back(forest.tree(t).Route(e));
    }
  }
  std::vector<std::vector<double>> products(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    const RowKey& key = keys[i];
    const DecisionTree& tree = forest.tree(key.tree);
    for (size_t j = 0; j < labeled.size(); ++j) {
      const NodeId leaf = routes[key.tree][j];
      const double y = *labeled[j].label;
      if (key.kind == RowKind::kTree) {
        products[i].push_back(tree.node(leaf).value * y);
      } else if (leaf == key.leaf) {
        products[i].push_back(LeafSign(tree.node(leaf).value) * y);
      }
    }
  }
  return products;
}

double HoeffdingPenalty(int32_t count, int32_t num_rows, double delta) {
  return std::sqrt(std::log(2.0 * num_rows / delta) / (2.0 * count));
}

CorrelationBounds EstimateBounds(
    std::span<const std::vector<double>> awake_products,
    const EstimationConfig& config) {
  Validate(config);
  CorrelationBounds bounds;
  bounds.config = config;
  const int32_t num_rows = static_cast<int32_t>(awake_products.size());
  for (int32_t i = 0; i < num_rows; ++i) {
    std::optional<AwakeCorrelation> corr =
        EmpiricalAwakeCorrelation(awake_products[i]);
    if (!corr) continue;
    double estimate = corr->correlation;
    switch (config.method) {
      case BoundMethod::kExact:
        break;
      case BoundMethod::kHoeffding:
        estimate -= HoeffdingPenalty(corr->count, num_rows, config.delta);
        break;
      case BoundMethod::kBootstrap: {
        Rng rng(DeriveSeed(config.seed, static_cast<uint64_t>(i)));
        estimate = BootstrapBound(awake_products[i], config.resamples,
                                  config.quantile, rng);
        break;
      }
    }
    bounds.b.push_back(Clamp(estimate, config.epsilon_b));
    bounds.awake_counts.push_back(corr->count);
    bounds.empirical.push_back(corr->correlation);
    bounds.kept_rows.push_back(i);
  }
  if (bounds.b.empty()) {
    throw Error(ErrorCode::kEstimationFailed,
                "no row is awake on any labeled example");
  }
  return bounds;
}

CorrelationBounds EstimateB(const Forest& forest, std::span<const RowKey> keys,
                            std::span<const Example> labeled,
                            const EstimationConfig& config) {
  if (labeled.empty()) {
    throw Error(ErrorCode::kEstimationFailed, "empty labeled set");
  }
  return EstimateBounds(AwakeProducts(forest, keys, labeled), config);
}

}  // namespace hedgeclipper
