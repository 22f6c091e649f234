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

// Dense two-phase simplex for the small exact oracles (game value, adversary
// value, feasibility). Not meant for large problems.

#ifndef HEDGECLIPPER_LINEAR_PROGRAM_H_
#define HEDGECLIPPER_LINEAR_PROGRAM_H_

#include <vector>

namespace hedgeclipper {

enum class ConstraintSense { kLessEqual, kGreaterEqual, kEqual };

// minimize objective^T x  subject to  rows[i]^T x (sense) rhs[i],  x >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<ConstraintSense> senses;
  std::vector<double> rhs;

  explicit LinearProgram(int num_vars) : objective(num_vars, 0.0) {}
  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_constraints() const { return static_cast<int>(rows.size()); }
  void AddConstraint(std::vector<double> coeffs, ConstraintSense sense,
                     double value);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  // Lagrange multipliers with objective - A^T duals >= 0 at optimality;
  // nonnegative for >= rows, nonpositive for <= rows.
  std::vector<double> duals;
  // Largest of primal infeasibility, dual infeasibility and duality gap.
  double kkt_residual = 0.0;
};

LpSolution SolveLinearProgram(const LinearProgram& lp,
                              int max_iterations = 200000);

// The KKT residual of a candidate primal/dual pair, as reported above.
double KktResidual(const LinearProgram& lp, const std::vector<double>& x,
                   const std::vector<double>& duals);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_LINEAR_PROGRAM_H_
