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
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbend/errors.hpp"

namespace qbend {

/// Global comparison/feasibility tolerance used across the solver.
inline constexpr double kTol = 1e-9;

/// A mixed-integer linear program
///
///   max  c'x + h'y
///   s.t. Ax + Gy <= b,  x in {0,1}^n,  y in R^p, y >= 0.
///
/// Immutable after construction; safe to share across threads.
struct MilpInstance {
  int n = 0;  // binary variables
  int p = 0;  // continuous variables
  int m = 0;  // constraint rows
  std::vector<double> c;               // length n
  std::vector<double> h;               // length p
  std::vector<std::vector<double>> A;  // m x n
  std::vector<std::vector<double>> G;  // m x p
  std::vector<double> b;               // length m

  bool operator==(const MilpInstance&) const = default;

  /// Throws DimensionError / ValueError when the shape invariants fail.
  void validate() const {
    if (n < 1) throw DimensionError("instance requires n >= 1");
    if (p < 0) throw DimensionError("instance requires p >= 0");
    if (m < 1) throw DimensionError("instance requires m >= 1");
    if (static_cast<int>(c.size()) != n)
      throw DimensionError("c must have length n");
    if (static_cast<int>(h.size()) != p)
      throw DimensionError("h must have length p");
    if (static_cast<int>(b.size()) != m)
      throw DimensionError("b must have length m");
    if (static_cast<int>(A.size()) != m)
      throw DimensionError("A must have m rows");
    if (static_cast<int>(G.size()) != m)
      throw DimensionError("G must have m rows");
    for (const auto& row : A)
      if (static_cast<int>(row.size()) != n)
        throw DimensionError("A rows must have length n");
    for (const auto& row : G)
      if (static_cast<int>(row.size()) != p)
        throw DimensionError("G rows must have length p");
    auto check_finite = [](const std::vector<double>& v) {
      for (double x : v)
        if (!std::isfinite(x)) throw ValueError("non-finite entry in instance");
    };
    check_finite(c);
    check_finite(h);
    check_finite(b);
    for (const auto& row : A) check_finite(row);
    for (const auto& row : G) check_finite(row);
  }
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// b - A x for a binary x.
inline std::vector<double> residual_rhs(const MilpInstance& inst,
                                        const std::vector<int>& x) {
  std::vector<double> d(inst.b);
  for (int i = 0; i < inst.m; ++i)
    for (int j = 0; j < inst.n; ++j) d[i] -= inst.A[i][j] * x[j];
  return d;
}

}  // namespace detail

/// Parses the JSON instance document. All keys are required:
///   { "n":int, "p":int, "m":int, "c":[n], "h":[p],
///     "A":[[n] x m], "G":[[p] x m], "b":[m] }
/// An empty G is also accepted as [] when p == 0.
inline MilpInstance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  MilpInstance inst;
  try {
    inst.n = j.at("n").get<int>();
    inst.p = j.at("p").get<int>();
    inst.m = j.at("m").get<int>();
    inst.c = j.at("c").get<std::vector<double>>();
    inst.h = j.at("h").get<std::vector<double>>();
    inst.b = j.at("b").get<std::vector<double>>();
    inst.A = j.at("A").get<std::vector<std::vector<double>>>();
    inst.G = j.at("G").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad instance document: ") + e.what());
  }
  if (inst.p == 0 && inst.G.empty() && inst.m > 0)
    inst.G.assign(inst.m, std::vector<double>{});
  inst.validate();
  return inst;
}

/// Serializes an instance back to the JSON schema. Round-trips exactly:
/// parse_instance(serialize_instance(inst)) == inst.
inline std::string serialize_instance(const MilpInstance& inst) {
  nlohmann::ordered_json j;
  j["n"] = inst.n;
  j["p"] = inst.p;
  j["m"] = inst.m;
  j["c"] = inst.c;
  j["h"] = inst.h;
  j["A"] = inst.A;
  j["G"] = inst.G;
  j["b"] = inst.b;
  return j.dump();
}

/// c'x + h'y.
inline double evaluate_objective(const MilpInstance& inst,
                                 const std::vector<int>& x,
                                 const std::vector<double>& y) {
  if (static_cast<int>(x.size()) != inst.n)
    throw DimensionError("x must have length n");
  if (static_cast<int>(y.size()) != inst.p)
    throw DimensionError("y must have length p");
  double value = 0.0;
  for (int j = 0; j < inst.n; ++j) value += inst.c[j] * x[j];
  for (int j = 0; j < inst.p; ++j) value += inst.h[j] * y[j];
  return value;
}

/// Row-wise feasibility report for a candidate (x, y).
struct FeasibilityReport {
  struct RowViolation {
    int row;        // constraint row index
    double amount;  // positive excess over b[row] + tol
  };
  bool feasible = true;
  std::vector<RowViolation> violated_rows;
  std::vector<RowViolation> negative_y;  // row = index j with y[j] < -tol

  explicit operator bool() const { return feasible; }
};

/// Checks Ax + Gy <= b + tol componentwise and y >= -tol.
inline FeasibilityReport check_feasible(const MilpInstance& inst,
                                        const std::vector<int>& x,
                                        const std::vector<double>& y,
                                        double tol = 1e-9) {
  if (static_cast<int>(x.size()) != inst.n)
    throw DimensionError("x must have length n");
  if (static_cast<int>(y.size()) != inst.p)
    throw DimensionError("y must have length p");
  if (!(tol >= 0)) throw ValueError("tol must be >= 0");
  FeasibilityReport report;
  for (int i = 0; i < inst.m; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < inst.n; ++j) lhs += inst.A[i][j] * x[j];
    for (int j = 0; j < inst.p; ++j) lhs += inst.G[i][j] * y[j];
    if (lhs > inst.b[i] + tol) {
      report.feasible = false;
      report.violated_rows.push_back({i, lhs - inst.b[i]});
    }
  }
  for (int j = 0; j < inst.p; ++j) {
    if (y[j] < -tol) {
      report.feasible = false;
      report.negative_y.push_back({j, -y[j]});
    }
  }
  return report;
}

/// Benders cut kind: extreme point (optimality) or extreme ray (feasibility)
/// of the dual polyhedron {u >= 0 : G'u >= h}.
enum class CutKind { Optimality, Feasibility };

/// One accumulated cut. `dual` has length m. For an optimality cut the
/// constraint reads (b - Ax)'u >= t; for a feasibility cut (b - Ax)'r >= 0.
struct Cut {
  CutKind kind = CutKind::Optimality;
  std::vector<double> dual;

  void validate() const {
    double max_abs = 0.0;
    for (double v : dual) {
      if (!std::isfinite(v)) throw ValueError("non-finite cut entry");
      if (v < -kTol) throw ValueError("cut vector must be nonnegative");
      max_abs = std::max(max_abs, std::fabs(v));
    }
    if (kind == CutKind::Feasibility && max_abs <= kTol)
      throw ValueError("feasibility ray must be nonzero");
  }
};

/// Accumulated extreme points and rays, in insertion order. Duplicate cuts
/// (same kind, componentwise within 1e-9) are dropped. Single-writer.
class MasterState {
 public:
  /// Returns false when the cut is a duplicate and was dropped.
  bool add_cut(const Cut& cut) {
    cut.validate();
    for (const Cut& existing : cuts_) {
      if (existing.kind != cut.kind) continue;
      if (existing.dual.size() != cut.dual.size()) continue;
      bool same = true;
      for (std::size_t i = 0; i < cut.dual.size() && same; ++i)
        same = std::fabs(existing.dual[i] - cut.dual[i]) <= kTol;
      if (same) return false;
    }
    cuts_.push_back(cut);
    return true;
  }

  const std::vector<Cut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }

  std::size_t count(CutKind kind) const {
    std::size_t k = 0;
    for (const Cut& c : cuts_)
      if (c.kind == kind) ++k;
    return k;
  }

 private:
  std::vector<Cut> cuts_;
};

}  // namespace qbend
