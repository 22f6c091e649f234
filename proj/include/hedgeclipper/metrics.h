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

#ifndef HEDGECLIPPER_METRICS_H_
#define HEDGECLIPPER_METRICS_H_

#include <span>

namespace hedgeclipper {

// Area under the ROC curve: P(score+ > score-) + P(tie) / 2 over all
// positive/negative pairs, computed exactly by sorting. Labels are +-1.
// Throws Undefined unless both classes are present.
double Auc(std::span<const double> scores, std::span<const int> labels);

// Expected 0/1 error of randomized predictions g in [-1, 1]:
// (1/2)(1 - (1/n) z^T g).
double ClassificationError(std::span<const double> g,
                           std::span<const int> labels);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
};
MeanStd Summarize(std::span<const double> values);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_METRICS_H_
