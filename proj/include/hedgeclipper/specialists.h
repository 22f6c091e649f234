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

// The specialist matrix S over the unlabeled set. Row i holds
//   S_ij = n * rho_i(x_j) * h_i(x_j),  rho_i(x_j) = v_i(x_j) / sum_k v_i(x_k),
// where v_i is the 0/1 participation indicator of row i. Rows come from the
// trees of a forest (always awake, soft leaf-mean predictions) and from
// their leaves (awake only on the examples routed to them, hard +-1
// predictions).

#ifndef HEDGECLIPPER_SPECIALISTS_H_
#define HEDGECLIPPER_SPECIALISTS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "hedgeclipper/dataset.h"
#include "hedgeclipper/forest.h"

namespace hedgeclipper {

enum class RowKind { kTree, kLeaf };

struct RowKey {
  RowKind kind = RowKind::kTree;
  int32_t tree = 0;
  NodeId leaf = kNoNode;  // kNoNode for tree rows

  static RowKey Tree(int32_t t) { return {RowKind::kTree, t, kNoNode}; }
  static RowKey Leaf(int32_t t, NodeId leaf) {
    return {RowKind::kLeaf, t, leaf};
  }
  bool operator==(const RowKey&) const = default;
};

// A row's realized predictions on the unlabeled set: h on the columns where
// it is awake, in increasing column order.
struct RowSpec {
  RowKey key;
  std::vector<int32_t> awake;
  std::vector<double> h;
};

// The prediction a row makes on an example, or nothing when it abstains.
// Tree rows predict the routed leaf value; leaf rows predict the sign of
// their leaf value and are awake only on examples routed to that leaf.
std::optional<double> RowResponse(const Forest& forest, const RowKey& key,
                                  const Example& example);

// Leaf-row prediction: sign of the leaf mean, 0 for an exact tie.
double LeafSign(double leaf_value);

// One tree row per tree, then one row per leaf that covers at least one
// unlabeled example, ordered by (tree, node id).
std::vector<RowSpec> BuildRows(const Forest& forest,
                               std::span<const Example> unlabeled);

// Immutable sparse S in compressed-row form, with a compressed-column copy
// for column-sampling consumers (minibatch SGD).
class SpecialistMatrix {
 public:
  SpecialistMatrix() = default;

  // Throws ZeroCoverageRow if some row is awake nowhere.
  static SpecialistMatrix Assemble(std::span<const RowSpec> rows, int32_t n);

  // Uniform participation: S = F exactly. `dense` is row-major p x n.
  static SpecialistMatrix FromDense(int32_t rows, int32_t cols,
                                    std::span<const double> dense);

  SpecialistMatrix SelectRows(std::span<const int32_t> keep) const;

  int32_t num_rows() const { return static_cast<int32_t>(keys_.size()); }
  int32_t num_cols() const { return num_cols_; }
  size_t nnz() const { return values_.size(); }

  const std::vector<RowKey>& keys() const { return keys_; }
  // n / (number of awake columns) per row.
  const std::vector<double>& row_scale() const { return row_scale_; }

  std::span<const int32_t> RowColumns(int32_t row) const {
    return {col_index_.data() + row_ptr_[row], col_index_.data() + row_ptr_[row + 1]};
  }
  std::span<const double> RowValues(int32_t row) const {
    return {values_.data() + row_ptr_[row], values_.data() + row_ptr_[row + 1]};
  }
  std::span<const int32_t> ColumnRows(int32_t col) const {
    return {row_index_.data() + col_ptr_[col], row_index_.data() + col_ptr_[col + 1]};
  }
  std::span<const double> ColumnValues(int32_t col) const {
    return {col_values_.data() + col_ptr_[col],
            col_values_.data() + col_ptr_[col + 1]};
  }

  double RowNorm(int32_t row) const;
  std::vector<double> ToDense() const;

  // "row col value" lines, 0-based indices.
  void DumpCoordinate(std::ostream& out) const;

 private:
  void BuildColumns();

  int32_t num_cols_ = 0;
  std::vector<RowKey> keys_;
  std::vector<double> row_scale_;
  std::vector<int64_t> row_ptr_{0};
  std::vector<int32_t> col_index_;
  std::vector<double> values_;
  std::vector<int64_t> col_ptr_;
  std::vector<int32_t> row_index_;
  std::vector<double> col_values_;
};

// The awake ensemble prediction S^T sigma. Contributions are accumulated in
// increasing row order for every column.
std::vector<double> AwakePrediction(const SpecialistMatrix& s,
                                    std::span<const double> sigma);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_SPECIALISTS_H_
