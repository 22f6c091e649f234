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
#include <limits>
#include <numeric>
#include <string>

#include "hedgeclipper/error.h"
#include "hedgeclipper/linear_program.h"
#include "hedgeclipper/random.h"

namespace hedgeclipper {
namespace {

void CheckShapes(const SpecialistMatrix& s, std::span<const double> b,
                 std::span<const double> sigma) {
  const size_t rows = static_cast<size_t>(s.num_rows());
  if (b.size() != rows || sigma.size() != rows) {
    throw Error(ErrorCode::kDimensionMismatch,
                "S has " + std::to_string(rows) + " rows, b has " +
                    std::to_string(b.size()) + ", sigma has " +
                    std::to_string(sigma.size()));
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "non-finite b");
  }
  for (double v : sigma) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite, "non-finite sigma");
    }
  }
}

void CheckAlpha(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be positive");
  }
}

void CheckBounds(const SpecialistMatrix& s, std::span<const double> b) {
  if (b.size() != static_cast<size_t>(s.num_rows())) {
    throw Error(ErrorCode::kDimensionMismatch, "b does not match S");
  }
}

double Sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

double Slack(const SpecialistMatrix& s, std::span<const double> b,
             std::span<const double> sigma, double alpha) {
  CheckShapes(s, b, sigma);
  CheckAlpha(alpha);
  double linear = 0.0;
  for (size_t i = 0; i < b.size(); ++i) linear += b[i] * sigma[i];
  double hinge = 0.0;
  for (double a : AwakePrediction(s, sigma)) {
    hinge += std::max(0.0, std::abs(a) - 1.0);
  }
  return -linear + alpha / s.num_cols() * hinge;
}

std::vector<double> Subgradient(const SpecialistMatrix& s,
                                std::span<const double> b,
                                std::span<const double> sigma, double alpha) {
  CheckShapes(s, b, sigma);
  CheckAlpha(alpha);
  const std::vector<double> awake = AwakePrediction(s, sigma);
  std::vector<double> active(awake.size());
  for (size_t j = 0; j < awake.size(); ++j) {
    active[j] = std::abs(awake[j]) > 1.0 ? Sign(awake[j]) : 0.0;
  }
  const double scale = alpha / s.num_cols();
  std::vector<double> grad(b.size());
  for (int32_t i = 0; i < s.num_rows(); ++i) {
    auto cols = s.RowColumns(i);
    auto vals = s.RowValues(i);
    double sum = 0.0;
    for (size_t k = 0; k < cols.size(); ++k) sum += active[cols[k]] * vals[k];
    grad[i] = -b[i] + scale * sum;
  }
  return grad;
}

std::vector<double> MinimizeSlack(const SpecialistMatrix& s,
                                  std::span<const double> b, double alpha,
                                  const SgdConfig& config) {
  CheckBounds(s, b);
  CheckAlpha(alpha);
  if (config.batch_size < 1 || config.epochs < 1 || config.step0 < 0 ||
      !(config.tolerance > 0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "SGD needs positive batch size, epochs and tolerance");
  }
  const int32_t rows = s.num_rows();
  const int32_t n = s.num_cols();
  double step0 = config.step0;
  if (step0 == 0.0) {
    double max_norm = 0.0;
    for (int32_t i = 0; i < rows; ++i) max_norm = std::max(max_norm, s.RowNorm(i));
    step0 = max_norm > 0 ? 1.0 / max_norm : 1.0;
  }

  std::vector<double> sigma(rows, 0.0);
  const double divergence_limit = 10.0 * std::max(1.0, std::abs(Slack(s, b, sigma, alpha)));
  std::vector<int32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(rows), average(rows);
  Rng rng(config.seed);
  int64_t step = 0;
  double previous = std::numeric_limits<double>::quiet_NaN();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(std::span<int32_t>(order), rng);
    std::fill(average.begin(), average.end(), 0.0);
    int64_t steps_this_epoch = 0;
    for (int32_t start = 0; start < n; start += config.batch_size) {
      const int32_t stop = std::min(n, start + config.batch_size);
      const double eta = step0 / std::sqrt(static_cast<double>(++step));
      const double scale = alpha / static_cast<double>(stop - start);
      for (int32_t i = 0; i < rows; ++i) grad[i] = -b[i];
      for (int32_t k = start; k < stop; ++k) {
        const int32_t j = order[k];
        auto col_rows = s.ColumnRows(j);
        auto col_vals = s.ColumnValues(j);
        double margin = 0.0;
        for (size_t e = 0; e < col_rows.size(); ++e) {
          margin += sigma[col_rows[e]] * col_vals[e];
        }
        if (std::abs(margin) <= 1.0) continue;
        const double w = scale * Sign(margin);
        for (size_t e = 0; e < col_rows.size(); ++e) {
          grad[col_rows[e]] += w * col_vals[e];
        }
      }
      for (int32_t i = 0; i < rows; ++i) {
        sigma[i] = std::max(0.0, sigma[i] - eta * grad[i]);
        average[i] += sigma[i];
      }
      ++steps_this_epoch;
    }
    for (double& v : average) v /= static_cast<double>(steps_this_epoch);

    const double current = Slack(s, b, average, alpha);
    if (current > divergence_limit) {
      throw Error(ErrorCode::kStepTooLarge,
                  "slack grew to " + std::to_string(current) + " at epoch " +
                      std::to_string(epoch));
    }
    if (std::abs(current - previous) <= config.tolerance) break;
    previous = current;
  }
  return average;
}

std::vector<double> ClipPredictions(std::span<const double> awake) {
  std::vector<double> g(awake.size());
  for (size_t j = 0; j < awake.size(); ++j) {
    g[j] = std::abs(awake[j]) < 1.0 ? awake[j] : Sign(awake[j]);
  }
  return g;
}

GameSolution MakeSolution(const SpecialistMatrix& s, std::span<const double> b,
                          std::vector<double> sigma, double alpha) {
  GameSolution solution;
  solution.gamma = Slack(s, b, sigma, alpha);
  solution.value = -solution.gamma;
  solution.awake = AwakePrediction(s, sigma);
  solution.g = ClipPredictions(solution.awake);
  solution.margins.resize(solution.awake.size());
  for (size_t j = 0; j < solution.awake.size(); ++j) {
    solution.margins[j] = std::abs(solution.awake[j]);
  }
  solution.sigma = std::move(sigma);
  return solution;
}

ExactSolution ExactSolveSmall(const SpecialistMatrix& s,
                              std::span<const double> b, double alpha) {
  CheckBounds(s, b);
  CheckAlpha(alpha);
  const int32_t p = s.num_rows();
  const int32_t n = s.num_cols();
  if (p > kExactMaxRows || n > kExactMaxCols) {
    throw Error(ErrorCode::kSizeLimit,
                "exact solve is limited to " + std::to_string(kExactMaxRows) +
                    " rows and " + std::to_string(kExactMaxCols) + " columns");
  }
  const std::vector<double> dense = s.ToDense();
  LinearProgram lp(p + n);
  for (int32_t i = 0; i < p; ++i) lp.objective[i] = -b[i];
  for (int32_t j = 0; j < n; ++j) lp.objective[p + j] = alpha / n;
  for (int32_t j = 0; j < n; ++j) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> row(p + n, 0.0);
      for (int32_t i = 0; i < p; ++i) {
        row[i] = sign * dense[static_cast<size_t>(i) * n + j];
      }
      row[p + j] = -1.0;
      lp.AddConstraint(std::move(row), ConstraintSense::kLessEqual, 1.0);
    }
  }
  LpSolution lp_solution = SolveLinearProgram(lp);
  if (lp_solution.status == LpStatus::kUnbounded) {
    throw Error(ErrorCode::kInfeasible,
                "slack is unbounded below: the bounds admit no labeling");
  }
  if (lp_solution.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInconsistent, "simplex hit its iteration limit");
  }

  ExactSolution solution;
  solution.sigma.assign(lp_solution.x.begin(), lp_solution.x.begin() + p);
  solution.gamma = Slack(s, b, solution.sigma, alpha);
  solution.adversary.resize(n);
  for (int32_t j = 0; j < n; ++j) {
    const double up = -lp_solution.duals[2 * j];
    const double down = -lp_solution.duals[2 * j + 1];
    solution.adversary[j] = n * (up - down);
  }
  solution.kkt_residual = lp_solution.kkt_residual;
  return solution;
}

std::vector<std::vector<int>> BruteForceFeasibleLabelings(
    const SpecialistMatrix& s, std::span<const double> b) {
  CheckBounds(s, b);
  const int32_t p = s.num_rows();
  const int32_t n = s.num_cols();
  if (n > kBruteForceMaxCols) {
    throw Error(ErrorCode::kSizeLimit,
                "enumeration is limited to " +
                    std::to_string(kBruteForceMaxCols) + " examples");
  }
  const std::vector<double> dense = s.ToDense();
  std::vector<std::vector<int>> feasible;
  std::vector<int> z(n);
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int32_t j = 0; j < n; ++j) z[j] = (mask >> j) & 1u ? 1 : -1;
    bool ok = true;
    for (int32_t i = 0; i < p && ok; ++i) {
      double sum = 0.0;
      for (int32_t j = 0; j < n; ++j) {
        sum += dense[static_cast<size_t>(i) * n + j] * z[j];
      }
      ok = sum / n >= b[i] - 1e-12;
    }
    if (ok) feasible.push_back(z);
  }
  return feasible;
}

double AdversaryValue(const SpecialistMatrix& s, std::span<const double> b,
                      std::span<const double> g) {
  CheckBounds(s, b);
  const int32_t p = s.num_rows();
  const int32_t n = s.num_cols();
  if (g.size() != static_cast<size_t>(n)) {
    throw Error(ErrorCode::kDimensionMismatch, "g does not match S");
  }
  // Substitute u = z + 1 in [0, 2] to get nonnegative variables.
  const std::vector<double> dense = s.ToDense();
  LinearProgram lp(n);
  double offset = 0.0;
  for (int32_t j = 0; j < n; ++j) {
    lp.objective[j] = g[j] / n;
    offset += g[j] / n;
    std::vector<double> row(n, 0.0);
    row[j] = 1.0;
    lp.AddConstraint(std::move(row), ConstraintSense::kLessEqual, 2.0);
  }
  for (int32_t i = 0; i < p; ++i) {
    std::vector<double> row(dense.begin() + static_cast<size_t>(i) * n,
                            dense.begin() + static_cast<size_t>(i + 1) * n);
    double row_sum = 0.0;
    for (double& v : row) {
      row_sum += v;
      v /= n;
    }
    lp.AddConstraint(std::move(row), ConstraintSense::kGreaterEqual,
                     b[i] + row_sum / n);
  }
  LpSolution solution = SolveLinearProgram(lp);
  if (solution.status == LpStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasible, "no labeling satisfies the bounds");
  }
  if (solution.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInconsistent, "adversary LP did not solve");
  }
  return solution.objective - offset;
}

double FeasibilityScale(const SpecialistMatrix& s, std::span<const double> b) {
  CheckBounds(s, b);
  const int32_t p = s.num_rows();
  const int32_t n = s.num_cols();
  const std::vector<double> dense = s.ToDense();
  // Variables: u = z + 1 (n of them), then t.
  LinearProgram lp(n + 1);
  lp.objective[n] = -1.0;
  for (int32_t j = 0; j < n; ++j) {
    std::vector<double> row(n + 1, 0.0);
    row[j] = 1.0;
    lp.AddConstraint(std::move(row), ConstraintSense::kLessEqual, 2.0);
  }
  {
    std::vector<double> row(n + 1, 0.0);
    row[n] = 1.0;
    lp.AddConstraint(std::move(row), ConstraintSense::kLessEqual, 1.0);
  }
  for (int32_t i = 0; i < p; ++i) {
    std::vector<double> row(n + 1, 0.0);
    double row_sum = 0.0;
    for (int32_t j = 0; j < n; ++j) {
      const double v = dense[static_cast<size_t>(i) * n + j];
      row[j] = v / n;
      row_sum += v;
    }
    row[n] = -b[i];
    lp.AddConstraint(std::move(row), ConstraintSense::kGreaterEqual,
                     row_sum / n);
  }
  LpSolution solution = SolveLinearProgram(lp);
  if (solution.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInconsistent, "feasibility LP did not solve");
  }
  return std::clamp(solution.x[n], 0.0, 1.0);
}

}  // namespace hedgeclipper
