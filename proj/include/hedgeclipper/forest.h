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

// Regularized CART random forest. Trees are grown with Gini impurity and a
// minimum number of training examples per leaf; the leaves later become
// specialists, so every node is addressable by its index in the tree.

#ifndef HEDGECLIPPER_FOREST_H_
#define HEDGECLIPPER_FOREST_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hedgeclipper/dataset.h"
#include "hedgeclipper/random.h"

namespace hedgeclipper {

// Index of a node inside its tree. Leaves are identified by their node id.
using NodeId = int32_t;
inline constexpr NodeId kNoNode = -1;

struct TreeNode {
  // Internal nodes: split feature (1-based), threshold and children.
  int32_t feature = 0;
  double threshold = 0.0;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  // Leaves: mean training label in [-1, 1]. Internal nodes keep the mean of
  // the examples that reached them, which is handy for inspection.
  double value = 0.0;
  int32_t train_count = 0;

  bool is_leaf() const { return left == kNoNode; }
};

struct ForestConfig {
  int num_trees = 100;
  int min_leaf = 4;
  // Features sampled per split; 0 selects max(1, floor(sqrt(d))).
  int max_features = 0;
  bool bootstrap = true;
  uint64_t seed = 0;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes);

  // Routing sends value <= threshold left; missing features read as 0.
  NodeId Route(const Example& example) const;
  double Predict(const Example& example) const {
    return nodes_[Route(example)].value;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(NodeId id) const { return nodes_[id]; }
  std::vector<NodeId> Leaves() const;
  int num_leaves() const;

 private:
  std::vector<TreeNode> nodes_;
};

class Forest {
 public:
  Forest() = default;
  Forest(std::vector<DecisionTree> trees, ForestConfig config,
         int32_t num_features)
      : trees_(std::move(trees)), config_(config), num_features_(num_features) {}

  const std::vector<DecisionTree>& trees() const { return trees_; }
  const DecisionTree& tree(size_t t) const { return trees_[t]; }
  size_t size() const { return trees_.size(); }
  const ForestConfig& config() const { return config_; }
  int32_t num_features() const { return num_features_; }

 private:
  std::vector<DecisionTree> trees_;
  ForestConfig config_;
  int32_t num_features_ = 0;
};

// Grows one tree on the given labeled examples (no resampling). num_features
// is the feature-space dimension d; 0 means FeatureDimension(examples).
DecisionTree TrainTree(std::span<const Example> examples,
                       const ForestConfig& config, Rng& rng,
                       int32_t num_features = 0);

// Same, on a multiset of examples given by index (bootstrap samples repeat
// indices). Every index must refer to a labeled example.
DecisionTree TrainTree(std::span<const Example> examples,
                       std::span<const int32_t> sample,
                       const ForestConfig& config, int32_t num_features,
                       Rng& rng);

// Tree t draws its bootstrap sample and feature subsets from the stream
// DeriveSeed(config.seed, t).
Forest TrainForest(std::span<const Example> examples,
                   const ForestConfig& config, int32_t num_features = 0);

NodeId Route(const DecisionTree& tree, const Example& example);

// Mean routed leaf value over the trees.
double MajorityVoteScore(const Forest& forest, const Example& example);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_FOREST_H_
