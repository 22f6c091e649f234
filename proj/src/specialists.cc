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

#include "hedgeclipper/specialists.h"

#include <cmath>
#include <string>

#include "hedgeclipper/error.h"

namespace hedgeclipper {

double LeafSign(double leaf_value) {
  return leaf_value > 0 ? 1.0 : (leaf_value < 0 ? -1.0 : 0.0);
}

std::optional<double> RowResponse(const Forest& forest, const RowKey& key,
                                  const Example& example) {
  const DecisionTree& tree = forest.tree(key.tree);
  const NodeId leaf = tree.Route(example);
  if (key.kind == RowKind::kTree) return tree.node(leaf).value;
  if (leaf != key.leaf) return std::nullopt;
  return LeafSign(tree.node(leaf).value);
}

std::vector<RowSpec> BuildRows(const Forest& forest,
                               std::span<const Example> unlabeled) {
  if (unlabeled.empty()) {
    throw Error(ErrorCode::kEmptyUnlabeled, "no unlabeled examples");
  }
  const int32_t n = static_cast<int32_t>(unlabeled.size());
  const int32_t p = static_cast<int32_t>(forest.size());
  std::vector<RowSpec> tree_rows(p);
  std::vector<RowSpec> leaf_rows;
  for (int32_t t = 0; t < p; ++t) {
    const DecisionTree& tree = forest.tree(t);
    std::vector<std::vector<int32_t>> by_leaf(tree.nodes().size());
    RowSpec& row = tree_rows[t];
    row.key = RowKey::Tree(t);
    row.awake.resize(n);
    row.h.resize(n);
    for (int32_t j = 0; j < n; ++j) {
      const NodeId leaf = tree.Route(unlabeled[j]);
      row.awake[j] = j;
      row.h[j] = tree.node(leaf).value;
      by_leaf[leaf].push_back(j);
    }
    for (NodeId leaf = 0; leaf < static_cast<NodeId>(by_leaf.size()); ++leaf) {
      if (by_leaf[leaf].empty()) continue;
      RowSpec spec;
      spec.key = RowKey::Leaf(t, leaf);
      spec.h.assign(by_leaf[leaf].size(), LeafSign(tree.node(leaf).value));
      spec.awake = std::move(by_leaf[leaf]);
      leaf_rows.push_back(std::move(spec));
    }
  }
  for (RowSpec& r : leaf_rows) tree_rows.push_back(std::move(r));
  return tree_rows;
}

SpecialistMatrix SpecialistMatrix::Assemble(std::span<const RowSpec> rows,
                                            int32_t n) {
  if (n <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "matrix needs at least 1 column");
  }
  SpecialistMatrix s;
  s.num_cols_ = n;
  s.keys_.reserve(rows.size());
  s.row_scale_.reserve(rows.size());
  s.row_ptr_.reserve(rows.size() + 1);
  for (size_t i = 0; i < rows.size(); ++i) {
    const RowSpec& row = rows[i];
    if (row.awake.empty()) {
      throw Error(ErrorCode::kZeroCoverageRow,
                  "row " + std::to_string(i) + " is awake on no example");
    }
    if (row.awake.size() != row.h.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row " + std::to_string(i) + " has mismatched h");
    }
    const double scale =
        static_cast<double>(n) / static_cast<double>(row.awake.size());
    for (size_t k = 0; k < row.awake.size(); ++k) {
      const int32_t j = row.awake[k];
      if (j < 0 || j >= n || (k > 0 && j <= row.awake[k - 1])) {
        throw Error(ErrorCode::kInvalidArgument,
                    "row " + std::to_string(i) +
                        " awake columns must be increasing and in range");
      }
      if (!std::isfinite(row.h[k])) {
        throw Error(ErrorCode::kNonFinite, "non-finite prediction");
      }
      s.col_index_.push_back(j);
      s.values_.push_back(scale * row.h[k]);
    }
    s.keys_.push_back(row.key);
    s.row_scale_.push_back(scale);
    s.row_ptr_.push_back(static_cast<int64_t>(s.values_.size()));
  }
  s.BuildColumns();
  return s;
}

SpecialistMatrix SpecialistMatrix::FromDense(int32_t rows, int32_t cols,
                                             std::span<const double> dense) {
  if (rows < 0 || cols <= 0 ||
      dense.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    throw Error(ErrorCode::kDimensionMismatch, "dense matrix shape mismatch");
  }
  std::vector<RowSpec> specs(rows);
  for (int32_t i = 0; i < rows; ++i) {
    specs[i].key = RowKey::Tree(i);
    specs[i].awake.resize(cols);
    specs[i].h.assign(dense.begin() + static_cast<size_t>(i) * cols,
                      dense.begin() + static_cast<size_t>(i + 1) * cols);
    for (int32_t j = 0; j < cols; ++j) specs[i].awake[j] = j;
  }
  return Assemble(specs, cols);
}

SpecialistMatrix SpecialistMatrix::SelectRows(
    std::span<const int32_t> keep) const {
  SpecialistMatrix s;
  s.num_cols_ = num_cols_;
  for (int32_t i : keep) {
    if (i < 0 || i >= num_rows()) {
      throw Error(ErrorCode::kInvalidArgument, "row selection out of range");
    }
    auto cols = RowColumns(i);
    auto vals = RowValues(i);
    s.col_index_.insert(s.col_index_.end(), cols.begin(), cols.end());
    s.values_.insert(s.values_.end(), vals.begin(), vals.end());
    s.keys_.push_back(keys_[i]);
    s.row_scale_.push_back(row_scale_[i]);
    s.row_ptr_.push_back(static_cast<int64_t>(s.values_.size()));
  }
  s.BuildColumns();
  return s;
}

void SpecialistMatrix::BuildColumns() {
  col_ptr_.assign(static_cast<size_t>(num_cols_) + 1, 0);
  for (int32_t j : col_index_) ++col_ptr_[j + 1];
  for (int32_t j = 0; j < num_cols_; ++j) col_ptr_[j + 1] += col_ptr_[j];
  row_index_.resize(values_.size());
  col_values_.resize(values_.size());
  std::vector<int64_t> next(col_ptr_.begin(), col_ptr_.end() - 1);
  for (int32_t i = 0; i < num_rows(); ++i) {
    for (int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int64_t slot = next[col_index_[k]]++;
      row_index_[slot] = i;
      col_values_[slot] = values_[k];
    }
  }
}

double SpecialistMatrix::RowNorm(int32_t row) const {
  double sum = 0.0;
  for (double v : RowValues(row)) sum += v * v;
  return std::sqrt(sum);
}

std::vector<double> SpecialistMatrix::ToDense() const {
  std::vector<double> dense(static_cast<size_t>(num_rows()) * num_cols_, 0.0);
  for (int32_t i = 0; i < num_rows(); ++i) {
    auto cols = RowColumns(i);
    auto vals = RowValues(i);
    for (size_t k = 0; k < cols.size(); ++k) {
      dense[static_cast<size_t>(i) * num_cols_ + cols[k]] = vals[k];
    }
  }
  return dense;
}

void SpecialistMatrix::DumpCoordinate(std::ostream& out) const {
  for (int32_t i = 0; i < num_rows(); ++i) {
    auto cols = RowColumns(i);
    auto vals = RowValues(i);
    for (size_t k = 0; k < cols.size(); ++k) {
      out << i << ' ' << cols[k] << ' ' << FormatDouble(vals[k]) << '\n';
    }
  }
}

std::vector<double> AwakePrediction(const SpecialistMatrix& s,
                                    std::span<const double> sigma) {
  if (sigma.size() != static_cast<size_t>(s.num_rows())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sigma has " + std::to_string(sigma.size()) + " entries, S has " +
                    std::to_string(s.num_rows()) + " rows");
  }
  std::vector<double> out(s.num_cols(), 0.0);
  for (int32_t i = 0; i < s.num_rows(); ++i) {
    const double w = sigma[i];
    if (w == 0.0) continue;
    auto cols = s.RowColumns(i);
    auto vals = s.RowValues(i);
    for (size_t k = 0; k < cols.size(); ++k) out[cols[k]] += w * vals[k];
  }
  return out;
}

}  // namespace hedgeclipper
