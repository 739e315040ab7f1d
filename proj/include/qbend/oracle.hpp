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

#include <limits>
#include <vector>

#include "qbend/errors.hpp"
#include "qbend/model.hpp"
#include "qbend/subproblem.hpp"

namespace qbend {

enum class MilpStatus { Optimal, Infeasible, Unbounded };

struct BruteForceResult {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<int> x;
  std::vector<double> y;
  double objective = -std::numeric_limits<double>::infinity();
};

/// Independent verification oracle: enumerates all 2^n binary assignments
/// and solves the LP over y for each. The first maximizer in counting order
/// (x[0] = least significant bit) is returned, so results are deterministic.
inline BruteForceResult brute_force_milp(const MilpInstance& inst) {
  if (inst.n > 20)
    throw TooLargeError("brute force enumeration limited to n <= 20");

  BruteForceResult best;
  std::vector<int> x(inst.n, 0);
  const unsigned long long total = 1ull << inst.n;
  for (unsigned long long mask = 0; mask < total; ++mask) {
    for (int i = 0; i < inst.n; ++i) x[i] = static_cast<int>((mask >> i) & 1u);
    PrimalLpResult lp = solve_primal_lp(inst, x);
    if (lp.status == LpSolveStatus::Unbounded) {
      best.status = MilpStatus::Unbounded;
      best.x = x;
      best.y.clear();
      best.objective = std::numeric_limits<double>::infinity();
      return best;
    }
    if (lp.status != LpSolveStatus::Optimal) continue;
    const double objective = evaluate_objective(inst, x, lp.y);
    if (best.status != MilpStatus::Optimal || objective > best.objective) {
      best.status = MilpStatus::Optimal;
      best.x = x;
      best.y = lp.y;
      best.objective = objective;
    }
  }
  return best;
}

}  // namespace qbend
