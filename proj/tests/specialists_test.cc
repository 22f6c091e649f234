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

#include <sstream>

#include "doctest.h"
#include "test_util.h"

namespace hedgeclipper {
namespace {

RowSpec Leaf(std::vector<int32_t> awake, double h) {
  RowSpec r;
  r.key = RowKey::Leaf(0, 1);
  r.h.assign(awake.size(), h);
  r.awake = std::move(awake);
  return r;
}

std::vector<Example> Points(std::vector<double> xs) {
  std::vector<Example> out;
  for (double x : xs) {
    Example e;
    if (x != 0) e.features.push_back({1, x});
    out.push_back(e);
  }
  return out;
}

Forest StumpForest() {
  // Tree 0: stump on feature 1 at 0.5 with leaf means -0.5 / +1.
  // Tree 1: a single leaf with mean 0.
  DecisionTree stump({TreeNode{.feature = 1, .threshold = 0.5, .left = 1,
                               .right = 2},
                      TreeNode{.value = -0.5}, TreeNode{.value = 1}});
  DecisionTree leaf({TreeNode{.value = 0.0}});
  return Forest({stump, leaf}, {}, 1);
}

TEST_CASE("leaf row entries") {
  const RowSpec rows[] = {Leaf({1, 4}, 1.0)};
  const auto s = SpecialistMatrix::Assemble(rows, 6);
  CHECK(s.ToDense() == std::vector<double>{0, 3, 0, 0, 3, 0});
  CHECK(s.row_scale()[0] == 3.0);

  const RowSpec single[] = {Leaf({7}, -1.0)};
  const auto t = SpecialistMatrix::Assemble(single, 10);
  REQUIRE(t.nnz() == 1);
  CHECK(t.RowValues(0)[0] == -10.0);
}

TEST_CASE("uniform participation gives S = F") {
  Rng rng(1);
  const auto inst = testing::RandomSpecialistInstance(rng, 5, 0, 9);
  const auto dense = inst.s.ToDense();
  for (double v : dense) CHECK((v == 1.0 || v == -1.0));
  for (double scale : inst.s.row_scale()) CHECK(scale == 1.0);
}

TEST_CASE("zero coverage row is rejected") {
  const RowSpec rows[] = {Leaf({}, 1.0)};
  CHECK(testing::CaughtCode([&] { SpecialistMatrix::Assemble(rows, 4); }) ==
        ErrorCode::kZeroCoverageRow);
}

TEST_CASE("build rows from a forest") {
  SUBCASE("single-leaf tree covers everything") {
    Forest forest({DecisionTree({TreeNode{.value = 0.5}})}, {}, 1);
    const auto rows = BuildRows(forest, Points({1, 2, 3, 4, 5}));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].key == RowKey::Tree(0));
    CHECK(rows[0].awake.size() == 5);
    CHECK(rows[0].h == std::vector<double>(5, 0.5));
    CHECK(rows[1].key == RowKey::Leaf(0, 0));
    CHECK(rows[1].awake.size() == 5);
    CHECK(rows[1].h == std::vector<double>(5, 1.0));
  }
  SUBCASE("uncovered leaf is dropped") {
    const auto rows = BuildRows(StumpForest(), Points({0.1, 0.2}));
    // Two tree rows, leaf 1 of tree 0, the root leaf of tree 1.
    REQUIRE(rows.size() == 4);
    CHECK(rows[2].key == RowKey::Leaf(0, 1));
    CHECK(rows[2].h == std::vector<double>{-1, -1});
    CHECK(rows[3].key == RowKey::Leaf(1, 0));
    CHECK(rows[3].h == std::vector<double>{0, 0});  // tie leaf
  }
}

TEST_CASE("row count matches covered leaves on a trained forest") {
  Rng rng(2);
  const auto data = testing::SyntheticExamples(rng, 300);
  const Forest forest = TrainForest(data, {.num_trees = 100, .min_leaf = 4, .seed = 3});
  const auto unlabeled = testing::SyntheticExamples(rng, 200);
  const auto rows = BuildRows(forest, unlabeled);
  size_t covered = 0;
  for (const DecisionTree& tree : forest.trees()) {
    std::vector<char> hit(tree.nodes().size(), 0);
    for (const Example& e : unlabeled) hit[tree.Route(e)] = 1;
    for (char h : hit) covered += h;
  }
  CHECK(rows.size() == 100 + covered);

  const auto s = SpecialistMatrix::Assemble(rows, 200);
  std::vector<int64_t> leaf_entries(100, 0);
  for (int32_t i = 0; i < s.num_rows(); ++i) {
    double rho = 0.0;
    for (double v : s.RowValues(i)) {
      CHECK(std::abs(v) <= 200.0);
      (void)v;
    }
    rho = static_cast<double>(s.RowColumns(i).size()) * s.row_scale()[i] / 200.0;
    CHECK(rho == doctest::Approx(1.0).epsilon(1e-15));
    if (s.keys()[i].kind == RowKind::kLeaf) {
      leaf_entries[s.keys()[i].tree] += s.RowColumns(i).size();
    }
  }
  for (int64_t e : leaf_entries) CHECK(e == 200);
}

TEST_CASE("awake prediction") {
  const RowSpec rows[] = {Leaf({1, 4}, 1.0)};
  const auto s = SpecialistMatrix::Assemble(rows, 6);
  CHECK(AwakePrediction(s, std::vector<double>{0.0}) == std::vector<double>(6, 0.0));
  const auto a = AwakePrediction(s, std::vector<double>{0.2});
  CHECK(a[1] == doctest::Approx(0.6));
  CHECK(a[4] == doctest::Approx(0.6));
  CHECK(a[0] == 0.0);
  CHECK(testing::CaughtCode([&] {
          AwakePrediction(s, std::vector<double>{1.0, 2.0});
        }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("awake prediction matches dense product and is linear") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::RandomSpecialistInstance(rng, 4, 6, 15);
    const auto dense = inst.s.ToDense();
    const int p = inst.s.num_rows(), n = inst.s.num_cols();
    std::vector<double> s1(p), s2(p), mix(p);
    for (int i = 0; i < p; ++i) {
      s1[i] = UniformUnit(rng);
      s2[i] = UniformUnit(rng);
      mix[i] = 0.3 * s1[i] + 2.0 * s2[i];
    }
    const auto a1 = AwakePrediction(inst.s, s1);
    const auto a2 = AwakePrediction(inst.s, s2);
    const auto am = AwakePrediction(inst.s, mix);
    for (int j = 0; j < n; ++j) {
      double expect = 0.0;
      for (int i = 0; i < p; ++i) expect += dense[i * n + j] * s1[i];
      CHECK(a1[j] == doctest::Approx(expect).epsilon(1e-12));
      CHECK(am[j] == doctest::Approx(0.3 * a1[j] + 2.0 * a2[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("row selection keeps keys and scales aligned") {
  Rng rng(6);
  const auto inst = testing::RandomSpecialistInstance(rng, 2, 4, 10);
  const int32_t keep[] = {0, 3, 5};
  const auto sub = inst.s.SelectRows(keep);
  REQUIRE(sub.num_rows() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(sub.keys()[k] == inst.s.keys()[keep[k]]);
    CHECK(sub.row_scale()[k] == inst.s.row_scale()[keep[k]]);
    CHECK(std::vector<double>(sub.RowValues(k).begin(), sub.RowValues(k).end()) ==
          std::vector<double>(inst.s.RowValues(keep[k]).begin(),
                              inst.s.RowValues(keep[k]).end()));
  }
  // Column view agrees with the row view.
  for (int32_t j = 0; j < sub.num_cols(); ++j) {
    for (size_t k = 0; k < sub.ColumnRows(j).size(); ++k) {
      const int32_t i = sub.ColumnRows(j)[k];
      const auto cols = sub.RowColumns(i);
      const auto it = std::find(cols.begin(), cols.end(), j);
      REQUIRE(it != cols.end());
      CHECK(sub.RowValues(i)[it - cols.begin()] == sub.ColumnValues(j)[k]);
    }
  }
}

TEST_CASE("coordinate dump") {
  const RowSpec rows[] = {Leaf({1, 4}, 1.0)};
  std::ostringstream out;
  SpecialistMatrix::Assemble(rows, 6).DumpCoordinate(out);
  CHECK(out.str() == "0 1 3\n0 4 3\n");
}

TEST_CASE("row response out of sample") {
  const Forest forest = StumpForest();
  const auto left = Points({0.1})[0];
  const auto right = Points({0.9})[0];
  CHECK(*RowResponse(forest, RowKey::Tree(0), left) == -0.5);
  CHECK(*RowResponse(forest, RowKey::Leaf(0, 1), left) == -1.0);
  CHECK(!RowResponse(forest, RowKey::Leaf(0, 2), left));
  CHECK(*RowResponse(forest, RowKey::Leaf(0, 2), right) == 1.0);
  CHECK(LeafSign(0.0) == 0.0);
  CHECK(LeafSign(-0.01) == -1.0);
}

}  // namespace
}  // namespace hedgeclipper
