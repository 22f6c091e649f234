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

#include "hedgeclipper/linear_program.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "hedgeclipper/error.h"

namespace hedgeclipper {
namespace {

constexpr double kCostTol = 1e-10;
constexpr double kPivotTol = 1e-10;
constexpr int kDegenerateSwitch = 50;
constexpr int kReinvertEvery = 100;

// Row-major tableau with the right-hand side in the last column.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * (cols + 1)) {}

  double& at(int i, int j) { return data_[static_cast<size_t>(i) * (cols_ + 1) + j]; }
  double at(int i, int j) const {
    return data_[static_cast<size_t>(i) * (cols_ + 1) + j];
  }
  double& rhs(int i) { return at(i, cols_); }
  double* row(int i) { return &data_[static_cast<size_t>(i) * (cols_ + 1)]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_, cols_;
  std::vector<double> data_;
};

class Simplex {
 public:
  Simplex(Tableau tableau, std::vector<int> basis, int max_iterations)
      : t_(std::move(tableau)),
        original_(t_),
        basis_(std::move(basis)),
        reduced_(t_.cols()),
        iterations_left_(max_iterations) {}

  // Minimizes cost^T x over the current tableau. Columns with
  // allowed[j] == false never enter the basis.
  LpStatus Run(const std::vector<double>& cost, const std::vector<char>& allowed) {
    ComputeReducedCosts(cost);
    bool fresh = true;
    int degenerate = 0;
    while (true) {
      if (iterations_left_-- <= 0) return LpStatus::kIterationLimit;
      const bool bland = degenerate >= kDegenerateSwitch;
      int enter = -1;
      double best = -kCostTol;
      for (int j = 0; j < t_.cols(); ++j) {
        if (!allowed[j] || reduced_[j] >= best) continue;
        enter = j;
        if (bland) break;
        best = reduced_[j];
      }
      if (enter < 0) {
        if (fresh) return LpStatus::kOptimal;
        // Rebuild from the original data before trusting the result.
        Reinvert();
        ComputeReducedCosts(cost);
        fresh = true;
        continue;
      }
      fresh = false;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < t_.rows(); ++i) {
        const double a = t_.at(i, enter);
        if (a <= kPivotTol) continue;
        const double r = std::max(t_.rhs(i), 0.0) / a;
        if (r < ratio - 1e-14 ||
            (r <= ratio + 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
          ratio = std::min(ratio, r);
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      degenerate = ratio == 0.0 ? degenerate + 1 : 0;
      Pivot(leave, enter);
      if (++pivots_ % kReinvertEvery == 0) {
        Reinvert();
        ComputeReducedCosts(cost);
      }
    }
  }

  // Recomputes the tableau as B^-1 [A | rhs] for the current basis by
  // Gauss-Jordan elimination on the original rows. Keeps the current tableau
  // if the basis looks singular.
  void Reinvert() {
    Tableau m = original_;
    const int rows = m.rows();
    const int width = m.cols() + 1;
    std::vector<int> order(rows);
    for (int i = 0; i < rows; ++i) order[i] = i;
    for (int k = 0; k < rows; ++k) {
      const int c = basis_[k];
      int pivot = -1;
      double best = 1e-11;
      for (int r = k; r < rows; ++r) {
        const double a = std::abs(m.at(order[r], c));
        if (a > best) {
          best = a;
          pivot = r;
        }
      }
      if (pivot < 0) return;
      std::swap(order[k], order[pivot]);
      double* prow = m.row(order[k]);
      const double inv = 1.0 / prow[c];
      for (int j = 0; j < width; ++j) prow[j] *= inv;
      prow[c] = 1.0;
      for (int r = 0; r < rows; ++r) {
        if (r == order[k]) continue;
        double* row = m.row(r);
        const double f = row[c];
        if (f == 0.0) continue;
        for (int j = 0; j < width; ++j) row[j] -= f * prow[j];
        row[c] = 0.0;
      }
    }
    for (int k = 0; k < rows; ++k) {
      std::copy(m.row(order[k]), m.row(order[k]) + width, t_.row(k));
    }
  }

  void Pivot(int leave, int enter) {
    const int width = t_.cols() + 1;
    double* prow = t_.row(leave);
    const double inv = 1.0 / prow[enter];
    for (int j = 0; j < width; ++j) prow[j] *= inv;
    prow[enter] = 1.0;
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == leave) continue;
      double* r = t_.row(i);
      const double f = r[enter];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) r[j] -= f * prow[j];
      r[enter] = 0.0;
    }
    const double f = reduced_[enter];
    if (f != 0.0) {
      for (int j = 0; j < t_.cols(); ++j) reduced_[j] -= f * prow[j];
      objective_ += f * prow[t_.cols()];
    }
    reduced_[enter] = 0.0;
    basis_[leave] = enter;
  }

  void ComputeReducedCosts(const std::vector<double>& cost) {
    reduced_ = cost;
    objective_ = 0.0;
    for (int i = 0; i < t_.rows(); ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < t_.cols(); ++j) reduced_[j] -= cb * t_.at(i, j);
      objective_ += cb * t_.rhs(i);
    }
  }

  Tableau& tableau() { return t_; }
  std::vector<int>& basis() { return basis_; }
  const std::vector<double>& reduced() const { return reduced_; }
  double objective() const { return objective_; }

 private:
  Tableau t_;
  Tableau original_;
  std::vector<int> basis_;
  std::vector<double> reduced_;
  double objective_ = 0.0;
  int iterations_left_;
  int64_t pivots_ = 0;
};

}  // namespace

void LinearProgram::AddConstraint(std::vector<double> coeffs,
                                  ConstraintSense sense, double value) {
  if (static_cast<int>(coeffs.size()) != num_vars()) {
    throw Error(ErrorCode::kDimensionMismatch, "constraint width mismatch");
  }
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(value);
}

double KktResidual(const LinearProgram& lp, const std::vector<double>& x,
                   const std::vector<double>& duals) {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  std::vector<double> reduced = lp.objective;
  double dual_objective = 0.0;
  for (int i = 0; i < lp.num_constraints(); ++i) {
    double lhs = 0.0;
    for (int j = 0; j < lp.num_vars(); ++j) lhs += lp.rows[i][j] * x[j];
    const double y = duals[i];
    switch (lp.senses[i]) {
      case ConstraintSense::kLessEqual:
        worst = std::max({worst, lhs - lp.rhs[i], y});
        break;
      case ConstraintSense::kGreaterEqual:
        worst = std::max({worst, lp.rhs[i] - lhs, -y});
        break;
      case ConstraintSense::kEqual:
        worst = std::max(worst, std::abs(lhs - lp.rhs[i]));
        break;
    }
    for (int j = 0; j < lp.num_vars(); ++j) reduced[j] -= y * lp.rows[i][j];
    dual_objective += y * lp.rhs[i];
  }
  double primal_objective = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    worst = std::max(worst, -reduced[j]);
    primal_objective += lp.objective[j] * x[j];
  }
  return std::max(worst, std::abs(primal_objective - dual_objective));
}

LpSolution SolveLinearProgram(const LinearProgram& lp, int max_iterations) {
  const int m = lp.num_constraints();
  const int nv = lp.num_vars();

  // Normalize to nonnegative right-hand sides.
  std::vector<ConstraintSense> sense = lp.senses;
  std::vector<char> flipped(m, 0);
  for (int i = 0; i < m; ++i) {
    if (lp.rhs[i] < 0) {
      flipped[i] = 1;
      if (sense[i] == ConstraintSense::kLessEqual) {
        sense[i] = ConstraintSense::kGreaterEqual;
      } else if (sense[i] == ConstraintSense::kGreaterEqual) {
        sense[i] = ConstraintSense::kLessEqual;
      }
    }
  }

  // Column layout: originals | slack or surplus | artificials.
  int num_slack = 0, num_art = 0;
  for (int i = 0; i < m; ++i) {
    if (sense[i] != ConstraintSense::kEqual) ++num_slack;
    if (sense[i] != ConstraintSense::kLessEqual) ++num_art;
  }
  const int cols = nv + num_slack + num_art;
  Tableau t(m, cols);
  std::vector<int> basis(m);
  std::vector<int> identity_column(m);  // column that started as e_i
  std::vector<char> is_artificial(cols, 0);
  int next_slack = nv, next_art = nv + num_slack;
  for (int i = 0; i < m; ++i) {
    const double sign = flipped[i] ? -1.0 : 1.0;
    for (int j = 0; j < nv; ++j) t.at(i, j) = sign * lp.rows[i][j];
    t.rhs(i) = sign * lp.rhs[i];
    switch (sense[i]) {
      case ConstraintSense::kLessEqual:
        t.at(i, next_slack) = 1.0;
        basis[i] = identity_column[i] = next_slack++;
        break;
      case ConstraintSense::kGreaterEqual:
        t.at(i, next_slack++) = -1.0;
        [[fallthrough]];
      case ConstraintSense::kEqual:
        t.at(i, next_art) = 1.0;
        is_artificial[next_art] = 1;
        basis[i] = identity_column[i] = next_art++;
        break;
    }
  }

  Simplex simplex(std::move(t), std::move(basis), max_iterations);
  LpSolution solution;
  std::vector<char> allowed(cols, 1);

  if (num_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (int j = 0; j < cols; ++j) phase1[j] = is_artificial[j] ? 1.0 : 0.0;
    LpStatus status = simplex.Run(phase1, allowed);
    if (status == LpStatus::kIterationLimit) {
      solution.status = status;
      return solution;
    }
    double scale = 1.0;
    for (double r : lp.rhs) scale = std::max(scale, std::abs(r));
    if (simplex.objective() > 1e-9 * scale) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (!is_artificial[simplex.basis()[i]]) continue;
      int best = -1;
      double best_abs = 1e-9;
      for (int j = 0; j < cols; ++j) {
        if (is_artificial[j]) continue;
        const double a = std::abs(simplex.tableau().at(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best >= 0) simplex.Pivot(i, best);
    }
    for (int j = 0; j < cols; ++j) allowed[j] = !is_artificial[j];
  }

  std::vector<double> cost(cols, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), cost.begin());
  solution.status = simplex.Run(cost, allowed);
  if (solution.status != LpStatus::kOptimal) return solution;

  solution.x.assign(nv, 0.0);
  for (int i = 0; i < m; ++i) {
    const int j = simplex.basis()[i];
    if (j < nv) solution.x[j] = std::max(simplex.tableau().rhs(i), 0.0);
  }
  solution.duals.resize(m);
  for (int i = 0; i < m; ++i) {
    const double y = -simplex.reduced()[identity_column[i]];
    solution.duals[i] = flipped[i] ? -y : y;
  }
  solution.objective = 0.0;
  for (int j = 0; j < nv; ++j) solution.objective += lp.objective[j] * solution.x[j];
  solution.kkt_residual = KktResidual(lp, solution.x, solution.duals);
  return solution;
}

}  // namespace hedgeclipper
