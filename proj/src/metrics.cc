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

#include "hedgeclipper/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hedgeclipper/error.h"

namespace hedgeclipper {

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scores and labels differ");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Twice the pair count keeps half-credit for ties integral.
  int64_t twice_wins = 0, positives = 0, negatives = 0;
  size_t start = 0;
  while (start < order.size()) {
    size_t stop = start;
    int64_t group_pos = 0, group_neg = 0;
    while (stop < order.size() && scores[order[stop]] == scores[order[start]]) {
      (labels[order[stop]] > 0 ? group_pos : group_neg) += 1;
      ++stop;
    }
    twice_wins += group_pos * (2 * negatives + group_neg);
    positives += group_pos;
    negatives += group_neg;
    start = stop;
  }
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kUndefined, "AUC needs both classes");
  }
  return static_cast<double>(twice_wins) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

double ClassificationError(std::span<const double> g,
                           std::span<const int> labels) {
  if (g.size() != labels.size() || g.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "predictions and labels differ");
  }
  double correlation = 0.0;
  for (size_t j = 0; j < g.size(); ++j) correlation += g[j] * labels[j];
  return 0.5 * (1.0 - correlation / static_cast<double>(g.size()));
}

MeanStd Summarize(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace hedgeclipper
