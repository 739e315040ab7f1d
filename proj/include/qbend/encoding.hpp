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
#include <vector>

#include "qbend/errors.hpp"
#include "qbend/model.hpp"

namespace qbend {

/// Fixed-point binary layout for the continuous master variable t.
///
/// A bit vector w of length total_bits() encodes
///
///   t(w) = sum_{i=-frac_bits}^{max_pos_exp} 2^i w[i + frac_bits]
///        - sum_{j=0}^{max_neg_exp}          2^j w[j + 1 + frac_bits + max_pos_exp]
///
/// i.e. a positive block of max_pos_exp + frac_bits + 1 bits (weights
/// 2^-frac_bits .. 2^max_pos_exp) followed by a negative block of
/// max_neg_exp + 1 bits (weights -2^0 .. -2^max_neg_exp). The same value can
/// have several encodings (a set positive bit can cancel a set negative
/// bit); the objective resolves the redundancy.
struct TEncoding {
  int max_pos_exp = 0;  // highest positive power of two
  int frac_bits = 0;    // fractional bits (2^-1 .. 2^-frac_bits)
  int max_neg_exp = 0;  // highest negative-block power of two

  void validate() const {
    if (max_pos_exp < 0 || frac_bits < 0 || max_neg_exp < 0)
      throw ConfigError("encoding bit counts must be nonnegative");
  }

  int pos_block_bits() const { return max_pos_exp + frac_bits + 1; }
  int neg_block_bits() const { return max_neg_exp + 1; }
  int total_bits() const { return pos_block_bits() + neg_block_bits(); }

  /// Signed weight of bit k in t(w).
  double bit_weight(int k) const {
    if (k < pos_block_bits()) return std::ldexp(1.0, k - frac_bits);
    return -std::ldexp(1.0, k - pos_block_bits());
  }

  /// Grid resolution 2^-frac_bits.
  double granularity() const { return std::ldexp(1.0, -frac_bits); }
};

/// Evaluates t(w).
inline double decode_t(const std::vector<int>& w, const TEncoding& enc) {
  if (static_cast<int>(w.size()) != enc.total_bits())
    throw DimensionError("w must have total_bits() entries");
  double t = 0.0;
  for (int k = 0; k < enc.total_bits(); ++k)
    if (w[k]) t += enc.bit_weight(k);
  return t;
}

/// (t_min, t_max): the negative block fully set gives t_min, the positive
/// block fully set gives t_max.
inline std::pair<double, double> t_range(const TEncoding& enc) {
  const double t_max =
      std::ldexp(1.0, enc.max_pos_exp + 1) - std::ldexp(1.0, -enc.frac_bits);
  const double t_min = -(std::ldexp(1.0, enc.max_neg_exp + 1) - 1.0);
  return {t_min, t_max};
}

/// Greedy exact encoder for on-grid values within range: the positive block
/// absorbs the value (shifted up by the smallest integer cancelling any
/// negative part), the negative block holds that integer.
inline std::vector<int> encode_t(double value, const TEncoding& enc) {
  const auto [t_min, t_max] = t_range(enc);
  if (value < t_min || value > t_max)
    throw ValueError("value outside representable range");
  double neg = value < 0.0 ? std::ceil(-value) : 0.0;
  double pos = value + neg;
  const double scale = std::ldexp(1.0, enc.frac_bits);
  const double scaled = pos * scale;
  auto pos_units = static_cast<std::int64_t>(std::llround(scaled));
  if (std::fabs(scaled - static_cast<double>(pos_units)) > 1e-9)
    throw ValueError("value is not on the encoding grid");
  auto neg_units = static_cast<std::int64_t>(std::llround(neg));

  std::vector<int> w(enc.total_bits(), 0);
  for (int k = 0; k < enc.pos_block_bits(); ++k)
    w[k] = static_cast<int>((pos_units >> k) & 1);
  for (int k = 0; k < enc.neg_block_bits(); ++k)
    w[enc.pos_block_bits() + k] = static_cast<int>((neg_units >> k) & 1);
  return w;
}

namespace detail {

inline bool is_integer_valued(double v) {
  return std::fabs(v - std::round(v)) <= kTol;
}

inline bool instance_is_integral(const MilpInstance& inst) {
  for (double v : inst.c)
    if (!is_integer_valued(v)) return false;
  for (double v : inst.h)
    if (!is_integer_valued(v)) return false;
  for (double v : inst.b)
    if (!is_integer_valued(v)) return false;
  for (const auto& row : inst.A)
    for (double v : row)
      if (!is_integer_valued(v)) return false;
  for (const auto& row : inst.G)
    for (double v : row)
      if (!is_integer_valued(v)) return false;
  return true;
}

// True when row r pins y_j below a single binary: G row = e_j, b = 0 and the
// A row is a lone -1.
inline bool is_unit_bound_row(const MilpInstance& inst, int r, int j) {
  if (inst.b[r] != 0.0) return false;
  for (int jj = 0; jj < inst.p; ++jj)
    if (inst.G[r][jj] != (jj == j ? 1.0 : 0.0)) return false;
  int minus_ones = 0;
  for (int i = 0; i < inst.n; ++i) {
    if (inst.A[r][i] == -1.0)
      ++minus_ones;
    else if (inst.A[r][i] != 0.0)
      return false;
  }
  return minus_ones == 1;
}

}  // namespace detail

/// Picks bit budgets so the representable range covers every value h'y can
/// take over the boxed y. Each y_j is assumed bounded by 1 when a row of the
/// form y_j <= x_i exists, by 10 otherwise; one unit of headroom is added on
/// each side. Fractional bits are only spent on non-integral data.
inline TEncoding choose_default_encoding(const MilpInstance& inst) {
  double pos_need = 1.0;
  double neg_need = 1.0;
  for (int j = 0; j < inst.p; ++j) {
    double bound = 10.0;
    for (int r = 0; r < inst.m; ++r) {
      if (detail::is_unit_bound_row(inst, r, j)) {
        bound = 1.0;
        break;
      }
    }
    if (inst.h[j] > 0)
      pos_need += inst.h[j] * bound;
    else
      neg_need += -inst.h[j] * bound;
  }

  TEncoding enc;
  enc.frac_bits = detail::instance_is_integral(inst) ? 0 : 3;
  while (std::ldexp(1.0, enc.max_pos_exp + 1) -
             std::ldexp(1.0, -enc.frac_bits) <
         pos_need)
    ++enc.max_pos_exp;
  while (std::ldexp(1.0, enc.max_neg_exp + 1) - 1.0 < neg_need)
    ++enc.max_neg_exp;
  return enc;
}

/// Slack register shape for one penalized inequality lhs <= rhs.
struct SlackSpec {
  int max_exp = 0;    // highest slack power of two
  int num_bits = 0;   // 0 when the constraint only holds with equality
  bool sub_unit_gap = false;  // gap in (0,1): integer slacks cannot fill it

  bool operator==(const SlackSpec&) const = default;
};

/// Sizes the slack register from gap = rhs - min_lhs, where min_lhs is the
/// constraint lhs minimized over the binary box (sum of its negative
/// coefficients, including the t bits for cut constraints). Widths follow
/// ceil(log2(gap)), clamped at zero; a gap at or below zero leaves no slack
/// bits at all. Gaps in (0,1) are flagged: they are representable only as 0
/// or 1, so the classical post-check has to arbitrate.
inline SlackSpec slack_width(double rhs, double min_lhs) {
  if (!std::isfinite(rhs) || !std::isfinite(min_lhs))
    throw ValueError("slack_width requires finite bounds");
  const double gap = rhs - min_lhs;
  if (gap < -kTol)
    throw InfeasibleConstraintError(
        "constraint unsatisfiable over the binary box");
  SlackSpec spec;
  if (gap <= 0.0) return spec;  // equality-only, zero slack bits
  if (gap <= 1.0) {
    spec.num_bits = 1;
    spec.sub_unit_gap = gap < 1.0;
    return spec;
  }
  spec.max_exp = static_cast<int>(std::ceil(std::log2(gap)));
  spec.num_bits = spec.max_exp + 1;
  return spec;
}

}  // namespace qbend
