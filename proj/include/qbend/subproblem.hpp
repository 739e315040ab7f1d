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
#include <vector>

#include "qbend/errors.hpp"
#include "qbend/model.hpp"
#include "qbend/simplex.hpp"

namespace qbend {

/// Feasibility tolerance on returned dual points/rays.
inline constexpr double kDualTol = 1e-7;

enum class DualStatus { Optimal, UnboundedBelow, DualInfeasible };

/// Outcome of the dual subproblem
///
///   z_LP(x) = min (b - Ax)'u   s.t.  G'u >= h, u >= 0.
///
/// Optimal carries a vertex u and the value z; UnboundedBelow carries an
/// extreme ray r (max-norm 1) of the dual polyhedron with (b - Ax)'r < 0,
/// which certifies that no feasible y exists at this x.
struct DualOutcome {
  DualStatus status = DualStatus::Optimal;
  std::vector<double> u;  // extreme point when Optimal
  double z = 0.0;         // objective value when Optimal
  std::vector<double> ray;
};

enum class LpSolveStatus { Optimal, Infeasible, Unbounded };

struct PrimalLpResult {
  LpSolveStatus status = LpSolveStatus::Optimal;
  std::vector<double> y;
  double value = 0.0;  // h'y when Optimal
};

namespace detail {

inline std::vector<double> clamp_nonnegative(std::vector<double> v) {
  for (double& x : v) x = std::max(0.0, x);
  return v;
}

inline void normalize_max_norm(std::vector<double>& v) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::fabs(x));
  if (mx > 0.0)
    for (double& x : v) x /= mx;
}

}  // namespace detail

/// Solves the dual subproblem at a fixed binary x. Stateless and
/// thread-safe on shared instances.
inline DualOutcome solve_dual(const MilpInstance& inst,
                              const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != inst.n)
    throw DimensionError("x must have length n");
  const std::vector<double> w = detail::residual_rhs(inst, x);

  DualOutcome outcome;
  if (inst.p == 0) {
    // No dual constraints: u = 0 is optimal unless some w_i < 0, in which
    // case the coordinate ray takes the objective to -infinity.
    for (int i = 0; i < inst.m; ++i) {
      if (w[i] < -kDualTol) {
        outcome.status = DualStatus::UnboundedBelow;
        outcome.ray.assign(inst.m, 0.0);
        outcome.ray[i] = 1.0;
        return outcome;
      }
    }
    outcome.status = DualStatus::Optimal;
    outcome.u.assign(inst.m, 0.0);
    outcome.z = 0.0;
    return outcome;
  }

  // Standard form over (u, s): G'u - s = h, u >= 0, s >= 0.
  std::vector<std::vector<double>> a(inst.p,
                                     std::vector<double>(inst.m + inst.p, 0.0));
  std::vector<double> rhs(inst.p);
  for (int j = 0; j < inst.p; ++j) {
    for (int i = 0; i < inst.m; ++i) a[j][i] = inst.G[i][j];
    a[j][inst.m + j] = -1.0;
    rhs[j] = inst.h[j];
  }
  std::vector<double> cost(inst.m + inst.p, 0.0);
  for (int i = 0; i < inst.m; ++i) cost[i] = w[i];

  detail::LpResult lp = detail::solve_standard_form(a, rhs, cost);
  switch (lp.status) {
    case detail::LpStatus::Infeasible:
      outcome.status = DualStatus::DualInfeasible;
      return outcome;
    case detail::LpStatus::Unbounded: {
      outcome.status = DualStatus::UnboundedBelow;
      outcome.ray.assign(lp.ray.begin(), lp.ray.begin() + inst.m);
      outcome.ray = detail::clamp_nonnegative(std::move(outcome.ray));
      detail::normalize_max_norm(outcome.ray);
      for (int j = 0; j < inst.p; ++j) {
        double gr = 0.0;
        for (int i = 0; i < inst.m; ++i) gr += inst.G[i][j] * outcome.ray[i];
        if (gr < -kDualTol)
          throw NumericalError("dual ray fails recession check");
      }
      if (detail::dot(w, outcome.ray) >= 0.0)
        throw NumericalError("dual ray does not certify unboundedness");
      return outcome;
    }
    case detail::LpStatus::Optimal: {
      outcome.status = DualStatus::Optimal;
      outcome.u.assign(lp.x.begin(), lp.x.begin() + inst.m);
      outcome.u = detail::clamp_nonnegative(std::move(outcome.u));
      outcome.z = lp.value;
      for (int j = 0; j < inst.p; ++j) {
        double gu = 0.0;
        for (int i = 0; i < inst.m; ++i) gu += inst.G[i][j] * outcome.u[i];
        if (gu < inst.h[j] - kDualTol)
          throw NumericalError("dual point fails feasibility check");
      }
      return outcome;
    }
  }
  throw NumericalError("unreachable dual status");
}

/// Recovers y at a fixed x:  max h'y  s.t.  Gy <= b - Ax, y >= 0.
/// By strong duality its optimal value matches solve_dual's z.
inline PrimalLpResult solve_primal_lp(const MilpInstance& inst,
                                      const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != inst.n)
    throw DimensionError("x must have length n");
  const std::vector<double> d = detail::residual_rhs(inst, x);

  PrimalLpResult result;
  if (inst.p == 0) {
    for (double di : d) {
      if (di < -kDualTol) {
        result.status = LpSolveStatus::Infeasible;
        return result;
      }
    }
    result.status = LpSolveStatus::Optimal;
    return result;
  }

  // Standard form over (y, s): Gy + s = d, y >= 0, s >= 0; minimize -h'y.
  std::vector<std::vector<double>> a(inst.m,
                                     std::vector<double>(inst.p + inst.m, 0.0));
  for (int i = 0; i < inst.m; ++i) {
    for (int j = 0; j < inst.p; ++j) a[i][j] = inst.G[i][j];
    a[i][inst.p + i] = 1.0;
  }
  std::vector<double> cost(inst.p + inst.m, 0.0);
  for (int j = 0; j < inst.p; ++j) cost[j] = -inst.h[j];

  detail::LpResult lp = detail::solve_standard_form(a, d, cost);
  switch (lp.status) {
    case detail::LpStatus::Infeasible:
      result.status = LpSolveStatus::Infeasible;
      return result;
    case detail::LpStatus::Unbounded:
      result.status = LpSolveStatus::Unbounded;
      return result;
    case detail::LpStatus::Optimal:
      result.status = LpSolveStatus::Optimal;
      result.y.assign(lp.x.begin(), lp.x.begin() + inst.p);
      result.y = detail::clamp_nonnegative(std::move(result.y));
      result.value = detail::dot(inst.h, result.y);
      return result;
  }
  throw NumericalError("unreachable primal status");
}

}  // namespace qbend
