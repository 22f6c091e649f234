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

// The specialist aggregation game. For weights sigma >= 0 over the rows of S
// the slack function is
//
//   gamma(sigma) = -b^T sigma + (alpha / n) sum_j [ |[S^T sigma]_j| - 1 ]_+ ,
//
// its minimum value is minus the game value V, and the minimax predictions
// clip the awake ensemble prediction S^T sigma* to [-1, 1]. Besides the SGD
// solver used in practice, this module carries exact small-instance oracles
// (an LP solve of the slack minimization, the adversary's LP, and brute-force
// enumeration of consistent labelings) that the tests check it against.

#ifndef HEDGECLIPPER_GAME_H_
#define HEDGECLIPPER_GAME_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hedgeclipper/specialists.h"

namespace hedgeclipper {

struct SgdConfig {
  int batch_size = 128;
  int epochs = 30;
  // Initial step; 0 selects 1 / (largest row 2-norm of S).
  double step0 = 0.0;
  // Stop early once the slack of consecutive epoch averages changes by no
  // more than this.
  double tolerance = 1e-9;
  uint64_t seed = 0;
};

struct GameSolution {
  std::vector<double> sigma;
  double gamma = 0.0;  // slack at sigma
  double value = 0.0;  // -gamma
  std::vector<double> awake;    // S^T sigma
  std::vector<double> g;        // clipped predictions
  std::vector<double> margins;  // |awake|
};

double Slack(const SpecialistMatrix& s, std::span<const double> b,
             std::span<const double> sigma, double alpha);

// A subgradient of Slack at sigma. Hinges exactly at the kink (|margin| = 1)
// contribute nothing.
std::vector<double> Subgradient(const SpecialistMatrix& s,
                                std::span<const double> b,
                                std::span<const double> sigma, double alpha);

// Projected minibatch SGD; returns the average of the iterates visited in the
// final epoch. Columns are sampled without replacement within an epoch.
// Throws StepTooLarge if an epoch average ends with slack above
// 10 * max(1, |slack(0)|).
std::vector<double> MinimizeSlack(const SpecialistMatrix& s,
                                  std::span<const double> b, double alpha,
                                  const SgdConfig& config);

// g_j = a_j if |a_j| < 1, else sign(a_j).
std::vector<double> ClipPredictions(std::span<const double> awake);

GameSolution MakeSolution(const SpecialistMatrix& s, std::span<const double> b,
                          std::vector<double> sigma, double alpha);

struct ExactSolution {
  std::vector<double> sigma;
  double gamma = 0.0;
  // Adversary certificate from the LP dual: w in [-alpha, alpha]^n with
  // (1/n) S w >= b and (1/n) ||w||_1 = -gamma.
  std::vector<double> adversary;
  double kkt_residual = 0.0;
};

inline constexpr int32_t kExactMaxRows = 50;
inline constexpr int32_t kExactMaxCols = 500;

// Solves the slack minimization as the epigraph LP
//   min -b^T sigma + (alpha/n) sum xi  s.t.  xi_j >= +-[S^T sigma]_j - 1,
//   sigma, xi >= 0.
// Throws SizeLimit beyond kExactMaxRows x kExactMaxCols, Infeasible when the
// slack is unbounded below (no labeling satisfies the bounds).
ExactSolution ExactSolveSmall(const SpecialistMatrix& s,
                              std::span<const double> b, double alpha);

inline constexpr int32_t kBruteForceMaxCols = 20;

// Every z in {-1, +1}^n with (1/n) S z >= b (up to 1e-12), in increasing
// binary order with bit j set meaning z_j = +1.
std::vector<std::vector<int>> BruteForceFeasibleLabelings(
    const SpecialistMatrix& s, std::span<const double> b);

// min over z in [-1, 1]^n with (1/n) S z >= b of (1/n) z^T g. Throws
// Infeasible if no such z exists.
double AdversaryValue(const SpecialistMatrix& s, std::span<const double> b,
                      std::span<const double> g);

// Largest t in [0, 1] such that some z in [-1, 1]^n has (1/n) S z >= t b.
// Used to diagnose (and, explicitly, repair) infeasible bound vectors.
double FeasibilityScale(const SpecialistMatrix& s, std::span<const double> b);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_GAME_H_
