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

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qbend/qbend.hpp"

namespace qbend::testing {

/// The worked 2x4 example instance used throughout the docs and tests:
/// two binaries gating four continuous variables with pairing constraints.
inline MilpInstance paper_instance() {
  MilpInstance inst;
  inst.n = 2;
  inst.p = 4;
  inst.m = 9;
  inst.c = {-15, -10};
  inst.h = {8, 9, 5, 6};
  inst.A = {{0, 0},  {0, 0},  {0, 0},  {0, 0}, {-1, -1},
            {-1, 0}, {-1, 0}, {0, -1}, {0, -1}};
  inst.G = {{1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0},
            {0, 1, 0, 1}, {0, 0, 0, 0}, {1, 0, 0, 0},
            {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  inst.b = {1, 1, 1, 1, -1, 0, 0, 0, 0};
  inst.validate();
  return inst;
}

inline int rand_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Gaussian elimination with partial pivoting; nullopt on singular systems.
inline std::optional<std::vector<double>> solve_linear(
    std::vector<std::vector<double>> a, std::vector<double> rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < 1e-9) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int cc = col; cc < n; ++cc) a[r][cc] -= f * a[col][cc];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[i] / a[i][i];
  return x;
}

/// Enumerates all basic feasible solutions of {u >= 0 : G'u >= h} by making
/// every m-subset of the p + m constraints tight. Independent of the simplex
/// path; intended for small m only.
inline std::vector<std::vector<double>> enumerate_dual_vertices(
    const MilpInstance& inst) {
  const int m = inst.m;
  const int p = inst.p;
  const int constraints = p + m;
  std::vector<std::vector<double>> vertices;

  for (std::uint32_t mask = 0; mask < (1u << constraints); ++mask) {
    if (__builtin_popcount(mask) != m) continue;
    std::vector<std::vector<double>> a;
    std::vector<double> rhs;
    for (int s = 0; s < constraints; ++s) {
      if (!((mask >> s) & 1u)) continue;
      std::vector<double> row(m, 0.0);
      if (s < p) {
        for (int i = 0; i < m; ++i) row[i] = inst.G[i][s];
        rhs.push_back(inst.h[s]);
      } else {
        row[s - p] = 1.0;
        rhs.push_back(0.0);
      }
      a.push_back(std::move(row));
    }
    auto u = solve_linear(a, rhs);
    if (!u) continue;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) ok = (*u)[i] >= -1e-7;
    for (int j = 0; j < p && ok; ++j) {
      double gu = 0.0;
      for (int i = 0; i < m; ++i) gu += inst.G[i][j] * (*u)[i];
      ok = gu >= inst.h[j] - 1e-7;
    }
    if (ok) vertices.push_back(*u);
  }
  return vertices;
}

/// min (b - Ax)'u over the enumerated vertices; nullopt when none exist.
inline std::optional<double> dual_vertex_minimum(const MilpInstance& inst,
                                                 const std::vector<int>& x) {
  const std::vector<double> w = detail::residual_rhs(inst, x);
  std::optional<double> best;
  for (const auto& u : enumerate_dual_vertices(inst)) {
    const double value = detail::dot(w, u);
    if (!best || value < *best) best = value;
  }
  return best;
}

/// Brute-force oracle for the binarized master: maximize c'x + t over all
/// x in {0,1}^n and all grid values of t, subject to the accumulated cuts.
/// nullopt when no (x, t) is feasible.
inline std::optional<double> master_brute_force(const MilpInstance& inst,
                                                const MasterState& state,
                                                const TEncoding& enc) {
  const auto [t_min, t_max] = t_range(enc);
  const double g = enc.granularity();
  std::optional<double> best;

  std::vector<int> x(inst.n, 0);
  for (std::uint32_t mask = 0; mask < (1u << inst.n); ++mask) {
    for (int i = 0; i < inst.n; ++i) x[i] = static_cast<int>((mask >> i) & 1u);
    const std::vector<double> d = detail::residual_rhs(inst, x);

    bool ok = true;
    double t_cap = t_max;
    for (const Cut& cut : state.cuts()) {
      const double lhs = detail::dot(d, cut.dual);
      if (cut.kind == CutKind::Feasibility) {
        if (lhs < -1e-9) {
          ok = false;
          break;
        }
      } else {
        t_cap = std::min(t_cap, lhs);
      }
    }
    if (!ok || t_cap < t_min - 1e-9) continue;
    const double t_best = std::floor((t_cap + 1e-9) / g) * g;
    const double objective = detail::dot(inst.c, std::vector<double>(x.begin(), x.end())) + t_best;
    if (!best || objective > *best) best = objective;
  }
  return best;
}

/// Random dense QUBO with integer entries in [lo, hi].
inline QuboMatrix random_qubo(std::mt19937_64& rng, int size, int lo, int hi) {
  QuboMatrix qubo;
  qubo.size = size;
  qubo.q.assign(size, std::vector<double>(size, 0.0));
  for (int i = 0; i < size; ++i) {
    for (int j = i; j < size; ++j) {
      const double v = rand_int(rng, lo, hi);
      qubo.q[i][j] = v;
      qubo.q[j][i] = v;
    }
  }
  return qubo;
}

/// Random LP-focused instance for the duality suite (no QUBO involvement,
/// so magnitudes run the full integer range).
inline MilpInstance random_lp_instance(std::mt19937_64& rng) {
  MilpInstance inst;
  inst.n = rand_int(rng, 1, 2);
  inst.p = rand_int(rng, 1, 5);
  inst.m = rand_int(rng, 1, 6);
  inst.c.assign(inst.n, 0.0);
  for (double& v : inst.c) v = rand_int(rng, -5, 5);
  inst.h.assign(inst.p, 0.0);
  for (double& v : inst.h) v = rand_int(rng, -5, 5);
  inst.A.assign(inst.m, std::vector<double>(inst.n, 0.0));
  inst.G.assign(inst.m, std::vector<double>(inst.p, 0.0));
  inst.b.assign(inst.m, 0.0);
  for (auto& row : inst.A)
    for (double& v : row) v = rand_int(rng, -5, 5);
  for (auto& row : inst.G)
    for (double& v : row) v = rand_int(rng, -5, 5);
  for (double& v : inst.b) v = rand_int(rng, -5, 5);

  if (rand_int(rng, 0, 1) == 0) {
    // Make some (x, y) feasible so Optimal/Optimal pairs are common.
    std::vector<int> x(inst.n);
    std::vector<double> y(inst.p);
    for (int& v : x) v = rand_int(rng, 0, 1);
    for (double& v : y) v = rand_int(rng, 0, 1);
    for (int i = 0; i < inst.m; ++i) {
      double lhs = 0.0;
      for (int j = 0; j < inst.n; ++j) lhs += inst.A[i][j] * x[j];
      for (int j = 0; j < inst.p; ++j) lhs += inst.G[i][j] * y[j];
      inst.b[i] = std::max(inst.b[i], lhs + rand_int(rng, 0, 2));
    }
  }
  inst.validate();
  return inst;
}

/// Random end-to-end instance for the decomposition-vs-oracle corpus.
///
/// The shape mirrors the worked example: every continuous variable gets a
/// unit bound row y_j <= x_i (which also keeps the dual polyhedron nonempty
/// and the default encoding small), remaining rows are signed interval rows
/// over y plus arbitrary integer coefficients on x. Interval rows keep the
/// LP data totally unimodular, so subproblem values land exactly on the
/// integer grid of the t register. Three flavors: feasible-by-construction,
/// unrestricted (often infeasible), and unbounded (one continuous variable
/// escapes every constraint).
inline MilpInstance random_corpus_instance(std::mt19937_64& rng) {
  const int mode = rand_int(rng, 0, 9);  // 0-4 feasible, 5-8 raw, 9 unbounded
  MilpInstance inst;
  inst.n = rand_int(rng, 1, 4);
  inst.p = rand_int(rng, 0, 3);
  const bool unbounded_mode = mode == 9 && inst.p >= 1;

  inst.c.assign(inst.n, 0.0);
  for (double& v : inst.c) v = rand_int(rng, -5, 5);
  inst.h.assign(inst.p, 0.0);
  for (double& v : inst.h) v = rand_int(rng, -3, 3);

  std::vector<int> gate(inst.p, 0);  // which binary bounds each y_j
  const int bounded_p = unbounded_mode ? inst.p - 1 : inst.p;
  const int extra_rows = rand_int(rng, 1, 3);
  inst.m = bounded_p + extra_rows;
  inst.A.assign(inst.m, std::vector<double>(inst.n, 0.0));
  inst.G.assign(inst.m, std::vector<double>(inst.p, 0.0));
  inst.b.assign(inst.m, 0.0);

  for (int j = 0; j < bounded_p; ++j) {
    gate[j] = rand_int(rng, 0, inst.n - 1);
    inst.A[j][gate[j]] = -1.0;
    inst.G[j][j] = 1.0;
    inst.b[j] = 0.0;
  }
  if (unbounded_mode) inst.h[inst.p - 1] = rand_int(rng, 1, 3);

  for (int r = bounded_p; r < inst.m; ++r) {
    for (int i = 0; i < inst.n; ++i) inst.A[r][i] = rand_int(rng, -2, 2);
    if (inst.p > 0 && rand_int(rng, 0, 3) > 0) {
      // Signed consecutive-ones block over the bounded y variables.
      const int span_max = std::max(bounded_p, 1);
      int lo = rand_int(rng, 0, span_max - 1);
      int hi = rand_int(rng, lo, span_max - 1);
      const double sign = rand_int(rng, 0, 1) ? 1.0 : -1.0;
      if (bounded_p > 0)
        for (int j = lo; j <= hi; ++j) inst.G[r][j] = sign;
    }
    inst.b[r] = rand_int(rng, -3, 3);
  }

  if (mode <= 4 || unbounded_mode) {
    // Raise right-hand sides until a sampled point fits.
    std::vector<int> x(inst.n);
    std::vector<double> y(inst.p, 0.0);
    for (int& v : x) v = rand_int(rng, 0, 1);
    for (int j = 0; j < bounded_p; ++j)
      y[j] = rand_int(rng, 0, 1) ? static_cast<double>(x[gate[j]]) : 0.0;
    for (int r = bounded_p; r < inst.m; ++r) {
      double lhs = 0.0;
      for (int i = 0; i < inst.n; ++i) lhs += inst.A[r][i] * x[i];
      for (int j = 0; j < inst.p; ++j) lhs += inst.G[r][j] * y[j];
      inst.b[r] = std::max(inst.b[r], lhs + rand_int(rng, 0, 2));
    }
  }
  inst.validate();
  return inst;
}

/// Random master case for the penalty-equivalence suite: a binary-only
/// instance (cut data is generated directly), a small integer-grid t
/// register, and up to two integer cuts.
struct MasterCase {
  MilpInstance inst;
  MasterState state;
  TEncoding enc;
};

inline MasterCase random_master_case(std::mt19937_64& rng) {
  // Magnitudes are capped so that even the widest slack registers keep the
  // QUBO within the exhaustive sampler's 24-bit guard.
  MasterCase mc;
  mc.inst.n = rand_int(rng, 1, 3);
  mc.inst.p = 0;
  mc.inst.m = rand_int(rng, 1, 2);
  mc.inst.c.assign(mc.inst.n, 0.0);
  for (double& v : mc.inst.c) v = rand_int(rng, -5, 5);
  mc.inst.A.assign(mc.inst.m, std::vector<double>(mc.inst.n, 0.0));
  for (auto& row : mc.inst.A)
    for (double& v : row) v = rand_int(rng, -2, 2);
  mc.inst.G.assign(mc.inst.m, std::vector<double>{});
  mc.inst.b.assign(mc.inst.m, 0.0);
  for (double& v : mc.inst.b) v = rand_int(rng, -3, 3);
  mc.inst.validate();

  // total_bits <= 5 with no fractional bits
  static constexpr int kShapes[][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1},
                                       {2, 0}, {0, 2}, {2, 1}, {1, 2},
                                       {3, 0}, {0, 3}};
  const auto& shape = kShapes[rand_int(rng, 0, 9)];
  mc.enc.max_pos_exp = shape[0];
  mc.enc.max_neg_exp = shape[1];

  const int cuts = rand_int(rng, 0, 2);
  for (int k = 0; k < cuts; ++k) {
    Cut cut;
    cut.kind = rand_int(rng, 0, 1) ? CutKind::Optimality : CutKind::Feasibility;
    cut.dual.assign(mc.inst.m, 0.0);
    double sum = 0.0;
    for (double& v : cut.dual) {
      v = rand_int(rng, 0, 2);
      sum += v;
    }
    if (cut.kind == CutKind::Feasibility && sum == 0.0)
      cut.dual[rand_int(rng, 0, mc.inst.m - 1)] = 1.0;
    mc.state.add_cut(cut);
  }
  return mc;
}

}  // namespace qbend::testing
