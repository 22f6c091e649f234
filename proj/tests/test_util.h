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

// Fixtures and oracles shared by the unit and acceptance tests.

#ifndef HEDGECLIPPER_TESTS_TEST_UTIL_H_
#define HEDGECLIPPER_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hedgeclipper/dataset.h"
#include "hedgeclipper/error.h"
#include "hedgeclipper/random.h"
#include "hedgeclipper/specialists.h"

namespace hedgeclipper::testing {

// Six classifiers (rows) on six unlabeled points (columns): three "A" rules
// that each miss a different pair of points, three identical "B" rules that
// miss x6.
inline std::vector<double> SixBySixDense() {
  return {
      -1, -1, +1, +1, +1, +1,  // A1
      +1, +1, -1, -1, +1, +1,  // A2
      +1, +1, +1, +1, -1, -1,  // A3
      +1, +1, +1, +1, +1, -1,  // B1
      +1, +1, +1, +1, +1, -1,  // B2
      +1, +1, +1, +1, +1, -1,  // B3
  };
}

inline SpecialistMatrix SixBySixMatrix() {
  return SpecialistMatrix::FromDense(6, 6, SixBySixDense());
}

// Correlations with the all-'+' labeling: 1 - 2 * error.
inline std::vector<double> SixBySixBounds() {
  return {1.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3, 2.0 / 3, 2.0 / 3};
}

template <typename Fn>
std::optional<ErrorCode> CaughtCode(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::vector<int> RandomLabels(Rng& rng, int n) {
  std::vector<int> z(n);
  for (int& v : z) v = UniformIndex(rng, 2) ? 1 : -1;
  return z;
}

struct Instance {
  SpecialistMatrix s;
  std::vector<double> b;
  std::vector<int> z;  // a labeling satisfying (1/n) S z >= b
};

// Random +-1 matrix with bounds that the hidden labeling z satisfies. Rows
// are sign-flipped so that their correlation with z is positive, and b_i is
// a random fraction of that correlation.
inline Instance RandomPlusMinusInstance(Rng& rng, int p, int n) {
  Instance inst;
  inst.z = RandomLabels(rng, n);
  std::vector<double> dense;
  for (int i = 0; i < p; ++i) {
    std::vector<double> row(n);
    double corr = 0.0;
    do {
      corr = 0.0;
      for (int j = 0; j < n; ++j) {
        row[j] = UniformIndex(rng, 2) ? 1.0 : -1.0;
        corr += row[j] * inst.z[j];
      }
    } while (corr == 0.0);
    if (corr < 0) {
      for (double& v : row) v = -v;
      corr = -corr;
    }
    dense.insert(dense.end(), row.begin(), row.end());
    inst.b.push_back(corr / n * (0.2 + 0.8 * UniformUnit(rng)));
  }
  inst.s = SpecialistMatrix::FromDense(p, n, dense);
  return inst;
}

// A specialist row awake on a random nonempty subset with +-1 predictions,
// together with a valid bound: a fraction of its correlation with z, which
// is forced positive by a sign flip (or by matching z) where needed.
struct SpecialistRow {
  RowSpec spec;
  double b = 0.0;
};

inline SpecialistRow RandomSpecialistRow(Rng& rng, std::span<const int> z,
                                         int32_t tree, NodeId leaf) {
  const int n = static_cast<int>(z.size());
  SpecialistRow out;
  out.spec.key = RowKey::Leaf(tree, leaf);
  for (int j = 0; j < n; ++j) {
    if (UniformIndex(rng, 3) == 0) out.spec.awake.push_back(j);
  }
  if (out.spec.awake.empty()) {
    out.spec.awake.push_back(static_cast<int32_t>(UniformIndex(rng, n)));
  }
  double corr = 0.0;
  for (int32_t j : out.spec.awake) {
    const double h = UniformIndex(rng, 2) ? 1.0 : -1.0;
    out.spec.h.push_back(h);
    corr += h * z[j];
  }
  if (corr <= 0) {
    for (size_t k = 0; k < out.spec.awake.size(); ++k) {
      out.spec.h[k] = z[out.spec.awake[k]];
    }
    corr = static_cast<double>(out.spec.awake.size());
  }
  out.b = corr / static_cast<double>(out.spec.awake.size()) *
          (0.2 + 0.8 * UniformUnit(rng));
  return out;
}

// Tree rows (always awake) followed by leaf-style specialists, all with
// valid bounds for z.
inline Instance RandomSpecialistInstance(Rng& rng, int tree_rows,
                                         int leaf_rows, int n) {
  Instance base = RandomPlusMinusInstance(rng, tree_rows, n);
  std::vector<RowSpec> rows;
  std::vector<double> b;
  for (int i = 0; i < tree_rows; ++i) {
    RowSpec spec;
    spec.key = RowKey::Tree(i);
    for (int j = 0; j < n; ++j) {
      spec.awake.push_back(j);
      spec.h.push_back(base.s.RowValues(i)[j]);
    }
    rows.push_back(std::move(spec));
    b.push_back(base.b[i]);
  }
  for (int k = 0; k < leaf_rows; ++k) {
    SpecialistRow row = RandomSpecialistRow(rng, base.z, 0, k);
    rows.push_back(std::move(row.spec));
    b.push_back(row.b);
  }
  return {SpecialistMatrix::Assemble(rows, n), b, base.z};
}

// Counts positive-negative pairs one by one.
inline double BruteForceAuc(std::span<const double> scores,
                            std::span<const int> labels) {
  int64_t doubled = 0, pos = 0, neg = 0;
  for (size_t a = 0; a < scores.size(); ++a) {
    if (labels[a] > 0) ++pos; else ++neg;
    if (labels[a] <= 0) continue;
    for (size_t c = 0; c < scores.size(); ++c) {
      if (labels[c] > 0) continue;
      doubled += scores[a] > scores[c] ? 2 : (scores[a] == scores[c] ? 1 : 0);
    }
  }
  return static_cast<double>(doubled) / (2.0 * static_cast<double>(pos) *
                                         static_cast<double>(neg));
}

// Two noisy informative features plus distractors; labels +-1.
inline std::vector<Example> SyntheticExamples(Rng& rng, int count,
                                              int num_features = 6) {
  std::vector<Example> out;
  for (int i = 0; i < count; ++i) {
    Example e;
    const int y = UniformIndex(rng, 2) ? 1 : -1;
    e.label = y;
    for (int f = 1; f <= num_features; ++f) {
      double v = UniformUnit(rng);
      if (f <= 2) v += 0.6 * y;
      v = std::round(v * 100) / 100;
      if (v != 0.0) e.features.push_back({f, v});
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("hedgeclipper_test_" + name))
      .string();
}

}  // namespace hedgeclipper::testing

#endif  // HEDGECLIPPER_TESTS_TEST_UTIL_H_
