// Copyright 2026 The qbend Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "qbend/errors.hpp"

namespace qbend::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> x;    // primal point when Optimal
  double value = 0.0;       // objective value when Optimal
  std::vector<double> ray;  // when Unbounded: d >= 0, Ad = 0, c'd < 0
};

// Dense two-phase primal simplex for
//
//   min c'x  s.t.  Ax = b,  x >= 0.
//
// Deterministic pivoting: most-negative reduced cost with lowest-index ties,
// lowest ratio with lowest-basic-index ties. Bland's rule is engaged after 50
// degenerate pivots. Unboundedness is certified by the recession direction of
// the entering column.
class StandardFormSimplex {
 public:
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kFeasTol = 1e-7;
  static constexpr int kDegenerateLimit = 50;
  static constexpr int kIterationLimit = 20000;

  StandardFormSimplex(std::vector<std::vector<double>> a,
                      std::vector<double> b, std::vector<double> cost)
      : rows_(static_cast<int>(a.size())),
        vars_(static_cast<int>(cost.size())),
        tableau_(std::move(a)),
        rhs_(std::move(b)),
        cost_(std::move(cost)) {}

  LpResult solve() {
    if (rows_ == 0) return solve_unconstrained();
    normalize_rhs_signs();
    append_artificials();

    // Phase 1: minimize the artificial sum.
    std::vector<double> phase1_cost(vars_ + rows_, 0.0);
    for (int i = 0; i < rows_; ++i) phase1_cost[vars_ + i] = 1.0;
    RunOutcome outcome = run_phase(phase1_cost, /*allow_artificials=*/true);
    if (outcome.unbounded)
      throw NumericalError("phase 1 cannot be unbounded");
    if (objective_value(phase1_cost) > kFeasTol) {
      LpResult result;
      result.status = LpStatus::Infeasible;
      return result;
    }
    drive_out_artificials();

    // Phase 2: original cost over the real columns.
    std::vector<double> phase2_cost = cost_;
    phase2_cost.resize(vars_ + rows_, 0.0);
    outcome = run_phase(phase2_cost, /*allow_artificials=*/false);

    LpResult result;
    if (outcome.unbounded) {
      result.status = LpStatus::Unbounded;
      result.ray.assign(vars_, 0.0);
      result.ray[outcome.entering] = 1.0;
      for (int i = 0; i < rows_; ++i) {
        if (basis_[i] < vars_)
          result.ray[basis_[i]] = std::max(0.0, -tableau_[i][outcome.entering]);
      }
      return result;
    }
    result.status = LpStatus::Optimal;
    result.x.assign(vars_, 0.0);
    for (int i = 0; i < rows_; ++i)
      if (basis_[i] < vars_) result.x[basis_[i]] = std::max(0.0, rhs_[i]);
    result.value = 0.0;
    for (int j = 0; j < vars_; ++j) result.value += cost_[j] * result.x[j];
    return result;
  }

 private:
  struct RunOutcome {
    bool unbounded = false;
    int entering = -1;
  };

  LpResult solve_unconstrained() const {
    LpResult result;
    for (int j = 0; j < vars_; ++j) {
      if (cost_[j] < -kPivotTol) {
        result.status = LpStatus::Unbounded;
        result.ray.assign(vars_, 0.0);
        result.ray[j] = 1.0;
        return result;
      }
    }
    result.status = LpStatus::Optimal;
    result.x.assign(vars_, 0.0);
    result.value = 0.0;
    return result;
  }

  void normalize_rhs_signs() {
    for (int i = 0; i < rows_; ++i) {
      if (rhs_[i] < 0) {
        rhs_[i] = -rhs_[i];
        for (double& v : tableau_[i]) v = -v;
      }
    }
  }

  void append_artificials() {
    basis_.resize(rows_);
    for (int i = 0; i < rows_; ++i) {
      tableau_[i].resize(vars_ + rows_, 0.0);
      tableau_[i][vars_ + i] = 1.0;
      basis_[i] = vars_ + i;
    }
  }

  double objective_value(const std::vector<double>& cost) const {
    double value = 0.0;
    for (int i = 0; i < rows_; ++i) value += cost[basis_[i]] * rhs_[i];
    return value;
  }

  // Reduced cost d_j = c_j - c_B' B^-1 A_j, recomputed from the tableau.
  double reduced_cost(const std::vector<double>& cost, int j) const {
    double d = cost[j];
    for (int i = 0; i < rows_; ++i) d -= cost[basis_[i]] * tableau_[i][j];
    return d;
  }

  RunOutcome run_phase(const std::vector<double>& cost,
                       bool allow_artificials) {
    const int cols = vars_ + (allow_artificials ? rows_ : 0);
    bool bland = false;
    int degenerate_pivots = 0;
    for (int iter = 0; iter < kIterationLimit; ++iter) {
      int entering = -1;
      double best = -kPivotTol;
      for (int j = 0; j < cols; ++j) {
        double d = reduced_cost(cost, j);
        if (d < best) {
          entering = j;
          if (bland) break;
          best = d;
        }
      }
      if (entering < 0) return {};

      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        double a = tableau_[i][entering];
        if (a <= kPivotTol) continue;
        double ratio = rhs_[i] / a;
        if (ratio < best_ratio - kPivotTol ||
            (ratio < best_ratio + kPivotTol &&
             (leaving < 0 || basis_[i] < basis_[leaving]))) {
          best_ratio = std::min(ratio, best_ratio);
          leaving = i;
        }
      }
      if (leaving < 0) return {true, entering};

      if (best_ratio <= kPivotTol) {
        if (++degenerate_pivots >= kDegenerateLimit) bland = true;
      } else {
        degenerate_pivots = 0;
      }
      pivot(leaving, entering);
    }
    throw NumericalError("simplex iteration limit exceeded");
  }

  void pivot(int row, int col) {
    double inv = 1.0 / tableau_[row][col];
    for (double& v : tableau_[row]) v *= inv;
    rhs_[row] *= inv;
    tableau_[row][col] = 1.0;  // kill roundoff on the pivot element
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      double factor = tableau_[i][col];
      if (std::fabs(factor) <= 0.0) continue;
      for (std::size_t j = 0; j < tableau_[i].size(); ++j)
        tableau_[i][j] -= factor * tableau_[row][j];
      tableau_[i][col] = 0.0;
      rhs_[i] -= factor * rhs_[row];
    }
    basis_[row] = col;
  }

  // After phase 1, pivot remaining zero-level artificials out of the basis;
  // rows that cannot be pivoted are redundant and get dropped.
  void drive_out_artificials() {
    for (int i = rows_ - 1; i >= 0; --i) {
      if (basis_[i] < vars_) continue;
      int col = -1;
      for (int j = 0; j < vars_; ++j) {
        if (std::fabs(tableau_[i][j]) > kFeasTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        tableau_.erase(tableau_.begin() + i);
        rhs_.erase(rhs_.begin() + i);
        basis_.erase(basis_.begin() + i);
        --rows_;
      }
    }
  }

  int rows_;
  int vars_;
  std::vector<std::vector<double>> tableau_;
  std::vector<double> rhs_;
  std::vector<double> cost_;
  std::vector<int> basis_;
};

inline LpResult solve_standard_form(std::vector<std::vector<double>> a,
                                    std::vector<double> b,
                                    std::vector<double> cost) {
  StandardFormSimplex simplex(std::move(a), std::move(b), std::move(cost));
  return simplex.solve();
}

}  // namespace qbend::detail
