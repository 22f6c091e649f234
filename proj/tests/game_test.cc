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

#include "hedgeclipper/game.h"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "test_util.h"

namespace hedgeclipper {
namespace {

using testing::CaughtCode;
using testing::SixBySixBounds;
using testing::SixBySixMatrix;

SpecialistMatrix OneRow(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  return SpecialistMatrix::FromDense(1, n, values);
}

std::vector<double> Unit(int p, int i) {
  std::vector<double> e(p, 0.0);
  e[i] = 1.0;
  return e;
}

TEST_CASE("slack examples") {
  const auto s = SixBySixMatrix();
  const auto b = SixBySixBounds();
  CHECK(Slack(s, b, std::vector<double>(6, 0.0), 1.0) == 0.0);
  CHECK(Slack(s, b, Unit(6, 3), 1.0) == doctest::Approx(-2.0 / 3).epsilon(1e-15));
  // -b^T sigma = -2/3 and the hinge is (1/6)(1 + 1).
  CHECK(Slack(s, b, std::vector<double>{1, 1, 0, 0, 0, 0}, 1.0) ==
        doctest::Approx(-1.0 / 3).epsilon(1e-15));
  CHECK(Slack(s, b, std::vector<double>{1, 1, 1, 0, 0, 0}, 1.0) ==
        doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("slack input checks") {
  const auto s = SixBySixMatrix();
  const auto b = SixBySixBounds();
  CHECK(CaughtCode([&] { Slack(s, b, std::vector<double>(5, 0.0), 1.0); }) ==
        ErrorCode::kDimensionMismatch);
  std::vector<double> bad(6, 0.0);
  bad[2] = std::nan("");
  CHECK(CaughtCode([&] { Slack(s, b, bad, 1.0); }) == ErrorCode::kNonFinite);
  CHECK(CaughtCode([&] { Slack(s, b, std::vector<double>(6, 0.0), 0.0); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("subgradient examples") {
  const auto s = SixBySixMatrix();
  const auto b = SixBySixBounds();
  const auto g0 = Subgradient(s, b, std::vector<double>(6, 0.0), 1.0);
  for (int i = 0; i < 6; ++i) CHECK(g0[i] == -b[i]);

  const auto row = OneRow({1, 1, 1, 1});
  const auto g = Subgradient(row, std::vector<double>{0.5}, std::vector<double>{2.0}, 1.0);
  CHECK(g[0] == doctest::Approx(0.5).epsilon(1e-15));

  // Margins all below one: only -b remains.
  const auto inactive = Subgradient(s, b, std::vector<double>(6, 0.1), 1.0);
  for (int i = 0; i < 6; ++i) CHECK(inactive[i] == -b[i]);
  // At the kink the hinge contributes nothing.
  const auto kink = Subgradient(row, std::vector<double>{0.5}, std::vector<double>{1.0}, 1.0);
  CHECK(kink[0] == -0.5);
}

TEST_CASE("clipping") {
  const std::vector<double> awake = {0.5, 1.7, -2.3, 0.0, 1.0, -1.0, -0.999};
  CHECK(ClipPredictions(awake) ==
        std::vector<double>{0.5, 1.0, -1.0, 0.0, 1.0, -1.0, -0.999});
}

TEST_CASE("single row game") {
  const auto row = OneRow({1, -1, 1, 1, -1, -1, 1, 1});
  const std::vector<double> b = {0.5};
  const ExactSolution exact = ExactSolveSmall(row, b, 1.0);
  CHECK(exact.gamma == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(exact.sigma[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.kkt_residual <= 1e-7);

  const auto sigma = MinimizeSlack(row, b, 1.0, {.batch_size = 8, .epochs = 2000});
  CHECK(std::abs(Slack(row, b, sigma, 1.0) + 0.5) <= 1e-3);
}

TEST_CASE("zero bounds give zero slack") {
  Rng rng(3);
  const auto inst = testing::RandomPlusMinusInstance(rng, 4, 12);
  const std::vector<double> zero(4, 0.0);
  const ExactSolution exact = ExactSolveSmall(inst.s, zero, 1.0);
  CHECK(std::abs(exact.gamma) <= 1e-12);
  for (double v : exact.sigma) CHECK(v == doctest::Approx(0.0));
  const auto sigma = MinimizeSlack(inst.s, zero, 1.0, {});
  CHECK(Slack(inst.s, zero, sigma, 1.0) >= 0.0);
  CHECK(Slack(inst.s, zero, sigma, 1.0) <= 1e-3);
}

TEST_CASE("six-classifier game") {
  const auto s = SixBySixMatrix();
  const auto b = SixBySixBounds();
  const ExactSolution exact = ExactSolveSmall(s, b, 1.0);
  // sigma = e_4 reaches -2/3; weighting the three A rules equally reaches -1,
  // and -1 is the floor because z = +1 is feasible with (1/n) z^T g <= 1.
  CHECK(exact.gamma <= -2.0 / 3);
  CHECK(exact.gamma == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(exact.kkt_residual <= 1e-7);

  const GameSolution sol = MakeSolution(s, b, exact.sigma, 1.0);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-12));
  for (double g : sol.g) CHECK(g == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("brute-force labelings") {
  const auto s = SixBySixMatrix();
  const auto found = BruteForceFeasibleLabelings(s, SixBySixBounds());
  REQUIRE(found.size() == 1);
  CHECK(found[0] == std::vector<int>(6, 1));

  const auto all = BruteForceFeasibleLabelings(s, std::vector<double>(6, -1.0));
  CHECK(all.size() == 64);
  CHECK(all.front() == std::vector<int>(6, -1));

  // No labeling agrees with both rows everywhere.
  const auto imperfect = SpecialistMatrix::FromDense(
      2, 3, std::vector<double>{1, 1, 1, 1, -1, 1});
  CHECK(BruteForceFeasibleLabelings(imperfect, std::vector<double>{1, 1}).empty());

  const auto wide = SpecialistMatrix::FromDense(1, 21, std::vector<double>(21, 1));
  CHECK(CaughtCode([&] { BruteForceFeasibleLabelings(wide, std::vector<double>{0}); }) ==
        ErrorCode::kSizeLimit);
}

TEST_CASE("adversary value") {
  const auto s = SixBySixMatrix();
  CHECK(AdversaryValue(s, SixBySixBounds(), std::vector<double>(6, 0.0)) ==
        doctest::Approx(0.0));
  // Summing the three A-rule constraints gives sum(z) >= 6, so z = +1 is
  // forced even over the continuous box and the value is 1.
  CHECK(AdversaryValue(s, SixBySixBounds(), std::vector<double>(6, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> g = {0.3, -0.2, 1.0, 0.0, -0.9, 0.5};
  CHECK(AdversaryValue(s, std::vector<double>(6, -1.0), g) ==
        doctest::Approx(-2.9 / 6).epsilon(1e-12));
  CHECK(CaughtCode([&] {
          AdversaryValue(s, std::vector<double>(6, 1.0), g);
        }) == ErrorCode::kInfeasible);
}

TEST_CASE("exact solver size limits and infeasibility") {
  const auto tall = SpecialistMatrix::FromDense(51, 1, std::vector<double>(51, 1));
  CHECK(CaughtCode([&] { ExactSolveSmall(tall, std::vector<double>(51, 0.1), 1.0); }) ==
        ErrorCode::kSizeLimit);
  const auto wide = SpecialistMatrix::FromDense(1, 501, std::vector<double>(501, 1));
  CHECK(CaughtCode([&] { ExactSolveSmall(wide, std::vector<double>{0.1}, 1.0); }) ==
        ErrorCode::kSizeLimit);
  // Two rows that cannot both hold: the slack is unbounded below.
  const auto clash = SpecialistMatrix::FromDense(2, 2, std::vector<double>{1, 1, -1, -1});
  const std::vector<double> b = {0.8, 0.8};
  CHECK(CaughtCode([&] { ExactSolveSmall(clash, b, 1.0); }) == ErrorCode::kInfeasible);
  CHECK(FeasibilityScale(clash, b) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(FeasibilityScale(SixBySixMatrix(), SixBySixBounds()) == doctest::Approx(1.0));
}

TEST_CASE("adversary certificate from the exact solve") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = testing::RandomSpecialistInstance(rng, 3, 4, 15);
    const double alpha = trial % 3 == 0 ? 0.3 : (trial % 3 == 1 ? 1.0 : 3.0);
    // The labels behind b lie in [-1, 1]; shrink to stay inside the box.
    for (double& b : inst.b) b *= std::min(1.0, alpha);
    const ExactSolution exact = ExactSolveSmall(inst.s, inst.b, alpha);
    const int n = inst.s.num_cols();
    double l1 = 0.0;
    for (double w : exact.adversary) {
      CHECK(std::abs(w) <= alpha + 1e-9);
      l1 += std::abs(w);
    }
    CHECK(l1 / n == doctest::Approx(-exact.gamma).epsilon(1e-8));
    const auto dense = inst.s.ToDense();
    for (int i = 0; i < inst.s.num_rows(); ++i) {
      double corr = 0.0;
      for (int j = 0; j < n; ++j) corr += dense[i * n + j] * exact.adversary[j];
      CHECK(corr / n >= inst.b[i] - 1e-9);
    }
  }
}

TEST_CASE("exact solve stays accurate on wide instances") {
  // The eighth draw here once left the simplex 3e-4 short of the optimum.
  Rng rng(2001);
  for (int trial = 0; trial < 8; ++trial) {
    const int p = 1 + static_cast<int>(UniformIndex(rng, 20));
    const int n = 2 + static_cast<int>(UniformIndex(rng, 199));
    const auto inst = testing::RandomPlusMinusInstance(rng, p, n);
    const ExactSolution exact = ExactSolveSmall(inst.s, inst.b, 1.0);
    CHECK(exact.kkt_residual <= 1e-9);
    CHECK(-exact.gamma >= *std::max_element(inst.b.begin(), inst.b.end()) - 1e-9);
  }
}

TEST_CASE("weak duality sandwich") {
  Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = testing::RandomSpecialistInstance(rng, 3, 3, 12);
    const int p = inst.s.num_rows();
    std::vector<double> sigma(p);
    for (double& v : sigma) v = UniformUnit(rng) * 2;
    const GameSolution sol = MakeSolution(inst.s, inst.b, sigma, 1.0);
    CHECK(AdversaryValue(inst.s, inst.b, sol.g) >= -sol.gamma - 1e-9);

    const ExactSolution exact = ExactSolveSmall(inst.s, inst.b, 1.0);
    const GameSolution best = MakeSolution(inst.s, inst.b, exact.sigma, 1.0);
    CHECK(AdversaryValue(inst.s, inst.b, best.g) ==
          doctest::Approx(-exact.gamma).epsilon(1e-8));
  }
}

TEST_CASE("slack is nondecreasing in alpha") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = testing::RandomPlusMinusInstance(rng, 5, 20);
    std::vector<double> sigma(5);
    for (double& v : sigma) v = UniformUnit(rng) * 2;
    const double a = Slack(inst.s, inst.b, sigma, 0.3);
    const double c = Slack(inst.s, inst.b, sigma, 1.0);
    const double d = Slack(inst.s, inst.b, sigma, 3.0);
    CHECK(a <= c);
    CHECK(c <= d);
  }
}

TEST_CASE("solution fields") {
  const auto s = SixBySixMatrix();
  const auto b = SixBySixBounds();
  const std::vector<double> sigma = {2, 0, 0, 1, 0, 0};
  const GameSolution sol = MakeSolution(s, b, sigma, 1.0);
  CHECK(sol.gamma == Slack(s, b, sigma, 1.0));
  CHECK(sol.value == -sol.gamma);
  CHECK(sol.awake == AwakePrediction(s, sigma));
  CHECK(sol.g == ClipPredictions(sol.awake));
  for (size_t j = 0; j < 6; ++j) CHECK(sol.margins[j] == std::abs(sol.awake[j]));
}

TEST_CASE("sgd is deterministic and rejects huge steps") {
  Rng rng(13);
  const auto inst = testing::RandomPlusMinusInstance(rng, 6, 40);
  const SgdConfig config{.batch_size = 7, .epochs = 20, .seed = 5};
  CHECK(MinimizeSlack(inst.s, inst.b, 1.0, config) ==
        MinimizeSlack(inst.s, inst.b, 1.0, config));
  CHECK(CaughtCode([&] {
          MinimizeSlack(inst.s, inst.b, 1.0, {.batch_size = 7, .step0 = 1e6});
        }) == ErrorCode::kStepTooLarge);
  CHECK(CaughtCode([&] {
          MinimizeSlack(inst.s, inst.b, 1.0, {.batch_size = 0});
        }) == ErrorCode::kInvalidArgument);
  for (double v : MinimizeSlack(inst.s, inst.b, 1.0, config)) CHECK(v >= 0.0);
}

}  // namespace
}  // namespace hedgeclipper
