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

#include "hedgeclipper/forest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "hedgeclipper/error.h"

namespace hedgeclipper {
namespace {

// n * (1 - p+^2 - p-^2): Gini impurity weighted by node size.
double WeightedGini(double pos, double neg) {
  const double n = pos + neg;
  if (n == 0) return 0.0;
  return n - (pos * pos + neg * neg) / n;
}

struct Split {
  int32_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;
  bool found = false;
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const Example> examples, const ForestConfig& config,
              int32_t num_features, Rng& rng)
      : examples_(examples),
        min_leaf_(std::max(1, config.min_leaf)),
        num_features_(num_features),
        rng_(rng) {
    max_features_ = config.max_features > 0
                        ? std::min(config.max_features, num_features)
                        : std::max<int32_t>(
                              1, static_cast<int32_t>(std::floor(
                                     std::sqrt(static_cast<double>(
                                         num_features)))));
    feature_order_.resize(num_features_);
    std::iota(feature_order_.begin(), feature_order_.end(), 1);
  }

  DecisionTree Build(std::vector<int32_t> sample) {
    nodes_.clear();
    nodes_.emplace_back();
    std::vector<std::pair<NodeId, std::vector<int32_t>>> stack;
    stack.emplace_back(0, std::move(sample));
    while (!stack.empty()) {
      auto [id, members] = std::move(stack.back());
      stack.pop_back();

      double pos = 0, neg = 0;
      for (int32_t i : members) (*examples_[i].label > 0 ? pos : neg) += 1;
      nodes_[id].train_count = static_cast<int32_t>(members.size());
      nodes_[id].value = (pos - neg) / (pos + neg);
      if (pos == 0 || neg == 0 ||
          members.size() < 2 * static_cast<size_t>(min_leaf_)) {
        continue;
      }
      Split split = FindSplit(members);
      if (!split.found || !(split.score < WeightedGini(pos, neg) - 1e-12)) {
        continue;
      }

      std::vector<int32_t> left, right;
      for (int32_t i : members) {
        (examples_[i].Get(split.feature) <= split.threshold ? left : right)
            .push_back(i);
      }
      NodeId left_id = static_cast<NodeId>(nodes_.size());
      nodes_.emplace_back();
      NodeId right_id = static_cast<NodeId>(nodes_.size());
      nodes_.emplace_back();
      TreeNode& node = nodes_[id];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left_id;
      node.right = right_id;
      stack.emplace_back(right_id, std::move(right));
      stack.emplace_back(left_id, std::move(left));
    }
    return DecisionTree(std::move(nodes_));
  }

 private:
  // Features are drawn without replacement until max_features of them have
  // turned out to be non-constant on this node (constant features do not
  // count toward the budget), or the feature space is exhausted.
  Split FindSplit(const std::vector<int32_t>& members) {
    Split best;
    int visited = 0;
    const size_t n = members.size();
    std::vector<std::pair<double, int>> column(n);
    for (int32_t k = 0; k < num_features_ && visited < max_features_; ++k) {
      int32_t j = k + static_cast<int32_t>(UniformIndex(rng_, num_features_ - k));
      std::swap(feature_order_[k], feature_order_[j]);
      const int32_t feature = feature_order_[k];

      for (size_t i = 0; i < n; ++i) {
        const Example& e = examples_[members[i]];
        column[i] = {e.Get(feature), *e.label};
      }
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      ++visited;

      double total_pos = 0;
      for (const auto& c : column) total_pos += c.second > 0;
      const double total_neg = static_cast<double>(n) - total_pos;
      double left_pos = 0, left_neg = 0;
      for (size_t i = 0; i + 1 < n; ++i) {
        (column[i].second > 0 ? left_pos : left_neg) += 1;
        const size_t left_count = i + 1;
        if (column[i].first == column[i + 1].first) continue;
        if (left_count < static_cast<size_t>(min_leaf_) ||
            n - left_count < static_cast<size_t>(min_leaf_)) {
          continue;
        }
        const double score =
            WeightedGini(left_pos, left_neg) +
            WeightedGini(total_pos - left_pos, total_neg - left_neg);
        double threshold =
            column[i].first + (column[i + 1].first - column[i].first) / 2;
        if (!(threshold < column[i + 1].first)) threshold = column[i].first;
        const bool better =
            !best.found || score < best.score ||
            (score == best.score &&
             (feature < best.feature ||
              (feature == best.feature && threshold < best.threshold)));
        if (better) best = {feature, threshold, score, true};
      }
    }
    return best;
  }

  std::span<const Example> examples_;
  int min_leaf_;
  int32_t num_features_;
  int32_t max_features_;
  Rng& rng_;
  std::vector<int32_t> feature_order_;
  std::vector<TreeNode> nodes_;
};

void CheckLabeled(std::span<const Example> examples) {
  if (examples.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot grow a tree on no data");
  }
  for (const Example& e : examples) {
    if (!e.label) {
      throw Error(ErrorCode::kInvalidArgument,
                  "tree training requires labeled examples");
    }
  }
}

}  // namespace

DecisionTree::DecisionTree(std::vector<TreeNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a tree needs at least one node");
  }
}

NodeId DecisionTree::Route(const Example& example) const {
  NodeId id = 0;
  while (!nodes_[id].is_leaf()) {
    const TreeNode& node = nodes_[id];
    id = example.Get(node.feature) <= node.threshold ? node.left : node.right;
  }
  return id;
}

std::vector<NodeId> DecisionTree::Leaves() const {
  std::vector<NodeId> leaves;
  for (NodeId i = 0; i < static_cast<NodeId>(nodes_.size()); ++i) {
    if (nodes_[i].is_leaf()) leaves.push_back(i);
  }
  return leaves;
}

int DecisionTree::num_leaves() const {
  return static_cast<int>(std::count_if(
      nodes_.begin(), nodes_.end(),
      [](const TreeNode& node) { return node.is_leaf(); }));
}

DecisionTree TrainTree(std::span<const Example> examples,
                       const ForestConfig& config, Rng& rng,
                       int32_t num_features) {
  std::vector<int32_t> sample(examples.size());
  std::iota(sample.begin(), sample.end(), 0);
  if (num_features <= 0) num_features = FeatureDimension(examples);
  return TrainTree(examples, sample, config, num_features, rng);
}

DecisionTree TrainTree(std::span<const Example> examples,
                       std::span<const int32_t> sample,
                       const ForestConfig& config, int32_t num_features,
                       Rng& rng) {
  CheckLabeled(examples);
  if (sample.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty training sample");
  }
  if (config.min_leaf < 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_leaf must be at least 1");
  }
  TreeBuilder builder(examples, config, std::max<int32_t>(num_features, 0),
                      rng);
  return builder.Build(std::vector<int32_t>(sample.begin(), sample.end()));
}

Forest TrainForest(std::span<const Example> examples,
                   const ForestConfig& config, int32_t num_features) {
  CheckLabeled(examples);
  if (config.num_trees < 1) {
    throw Error(ErrorCode::kInvalidArgument, "a forest needs at least 1 tree");
  }
  if (num_features <= 0) num_features = FeatureDimension(examples);
  const uint64_t m = examples.size();
  std::vector<DecisionTree> trees;
  trees.reserve(config.num_trees);
  for (int t = 0; t < config.num_trees; ++t) {
    Rng rng(DeriveSeed(config.seed, static_cast<uint64_t>(t)));
    std::vector<int32_t> sample(m);
    if (config.bootstrap) {
      for (auto& s : sample) s = static_cast<int32_t>(UniformIndex(rng, m));
    } else {
      std::iota(sample.begin(), sample.end(), 0);
    }
    trees.push_back(TrainTree(examples, sample, config, num_features, rng));
  }
  return Forest(std::move(trees), config, num_features);
}

NodeId Route(const DecisionTree& tree, const Example& example) {
  return tree.Route(example);
}

double MajorityVoteScore(const Forest& forest, const Example& example) {
  double sum = 0.0;
  for (const DecisionTree& tree : forest.trees()) sum += tree.Predict(example);
  return sum / static_cast<double>(forest.size());
}

}  // namespace hedgeclipper
