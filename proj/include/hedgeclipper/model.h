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

// A trained HedgeClipper model and its on-disk container.
//
// Container layout (all integers little-endian):
//   bytes 0..3   magic "HGCL"
//   u32          format version (kModelFormatVersion)
//   u64          header length H, then H bytes of UTF-8 JSON
//   u64          payload length P (bytes), then P bytes of f64 values:
//                node thresholds of every tree, node values of every tree,
//                then the per-row scales
//   u64          FNV-1a 64 checksum of every preceding byte
//
// The JSON header holds the config, alpha, b, sigma, the row registry and
// the tree topology (features, children, training counts).

#ifndef HEDGECLIPPER_MODEL_H_
#define HEDGECLIPPER_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hedgeclipper/config.h"
#include "hedgeclipper/dataset.h"
#include "hedgeclipper/forest.h"
#include "hedgeclipper/specialists.h"

namespace hedgeclipper {

inline constexpr uint32_t kModelFormatVersion = 1;

struct Model {
  Forest forest;
  std::vector<RowKey> rows;
  std::vector<double> row_scale;
  std::vector<double> b;
  std::vector<double> sigma;
  double alpha = 1.0;
  int32_t num_unlabeled = 0;
  PipelineConfig config;

  // Out-of-sample awake prediction: sum over the rows awake at `example` of
  // sigma_i * row_scale_i * h_i(example). Tree rows are always awake. On a
  // column of the training unlabeled set this reproduces [S^T sigma]_j
  // bit for bit.
  double Awake(const Example& example) const;
  double Predict(const Example& example) const;
  // The majority-vote score of the underlying forest.
  double BaseScore(const Example& example) const;
};

// Throws Inconsistent if the parts of the model disagree.
void ValidateModel(const Model& model);

std::string SerializeModel(const Model& model);
Model DeserializeModel(std::string_view bytes);
void SaveModel(const Model& model, const std::string& path);
Model LoadModel(const std::string& path);

// Low-level pieces of the container, exposed for tooling and tests.
uint64_t Fnv1a64(std::string_view bytes);
std::string EncodeContainer(const nlohmann::json& header,
                            std::span<const double> payload,
                            uint32_t version = kModelFormatVersion);
nlohmann::json ModelHeader(const Model& model);
std::vector<double> ModelPayload(const Model& model);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_MODEL_H_
