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
#include <utility>
#include <vector>

#include "qbend/encoding.hpp"
#include "qbend/errors.hpp"
#include "qbend/model.hpp"

namespace qbend {

/// Symmetric QUBO with an explicit constant, so that
/// energy(bits) = bits' Q bits + offset reproduces the penalized master
/// objective exactly. Diagonal entries carry the linear terms (z^2 = z for
/// binaries). Immutable once built.
struct QuboMatrix {
  int size = 0;
  std::vector<std::vector<double>> q;  // size x size, q[i][j] == q[j][i]
  double offset = 0.0;
};

enum class PenaltyMode { Auto, Fixed };

/// Penalty weights for the cut blocks. Auto derives a uniform value from
/// the objective range (see auto_penalty); Fixed uses fixed_value. Optional
/// per-cut overrides follow cut-insertion order; missing tail entries fall
/// back to the uniform value.
struct PenaltyConfig {
  PenaltyMode mode = PenaltyMode::Auto;
  double fixed_value = 0.0;
  double escalation_factor = 10.0;
  int max_escalations = 3;
  std::vector<double> per_cut_values;

  void validate() const {
    if (mode == PenaltyMode::Fixed && !(fixed_value > 0))
      throw ConfigError("fixed penalty must be positive");
    if (!(escalation_factor > 1))
      throw ConfigError("escalation factor must exceed 1");
    if (max_escalations < 0)
      throw ConfigError("max escalations must be nonnegative");
    for (double v : per_cut_values)
      if (!(v > 0)) throw ConfigError("per-cut penalties must be positive");
  }
};

enum class SlackSource { OptimalityCut, FeasibilityCut, XRow };

/// Placement of the bit blocks inside the QUBO variable vector:
/// x bits in [0, n), t bits in [n, n + M), then one slack block per
/// penalized constraint in insertion order.
struct VariableLayout {
  struct SlackBlock {
    SlackSource source = SlackSource::OptimalityCut;
    int source_index = 0;  // cut insertion index, or constraint row for XRow
    int begin = 0;
    SlackSpec spec;
  };

  int n = 0;
  int t_bits = 0;
  int total = 0;
  std::vector<SlackBlock> slack_blocks;
  bool quantization_warning = false;  // some slack block has a sub-unit gap
  // True when every penalized coefficient and right-hand side sits on the
  // encoding grid, so penalties vanish exactly on feasible assignments and a
  // violating exact argmin certifies that no feasible assignment exists.
  bool exact_penalties = true;

  int x_index(int i) const { return i; }
  int w_index(int k) const { return n + k; }

  std::vector<int> decode_x(const std::vector<int>& bits) const {
    return {bits.begin(), bits.begin() + n};
  }
  std::vector<int> decode_w(const std::vector<int>& bits) const {
    return {bits.begin() + n, bits.begin() + n + t_bits};
  }
};

/// Expanded quadratic of one squared penalty, over named bit indices.
/// off_diag holds the combined coefficient of z_i z_j (i < j).
struct PenaltyTerms {
  std::vector<std::pair<int, double>> diag;
  std::vector<std::tuple<int, int, double>> off_diag;
  double constant = 0.0;
};

/// Expands P * (sum coeffs[i] * z_i + sum_l 2^l s_l - rhs)^2 with a fresh
/// slack register of `slack.num_bits` bits starting at slack_base.
inline PenaltyTerms penalize_inequality(
    const std::vector<std::pair<int, double>>& coeffs, double rhs, double P,
    const SlackSpec& slack, int slack_base) {
  std::vector<std::pair<int, double>> terms = coeffs;
  for (int l = 0; l < slack.num_bits; ++l)
    terms.emplace_back(slack_base + l, std::ldexp(1.0, l));

  PenaltyTerms out;
  out.constant = P * rhs * rhs;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto [bi, ai] = terms[i];
    out.diag.emplace_back(bi, P * ai * (ai - 2.0 * rhs));
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      const auto [bj, aj] = terms[j];
      out.off_diag.emplace_back(bi, bj, 2.0 * P * ai * aj);
    }
  }
  return out;
}

/// Uniform penalty weight: 2 * (objective range over the box) / g^2 where
/// the range is sum |c_i| + (t_max - t_min) and g is the encoding grid step.
/// Any single-grid-unit violation then costs more than any objective gain.
inline double auto_penalty(const MilpInstance& inst,
                           [[maybe_unused]] const MasterState& state,
                           const TEncoding& enc) {
  double range = 0.0;
  for (double ci : inst.c) range += std::fabs(ci);
  const auto [t_min, t_max] = t_range(enc);
  range += t_max - t_min;
  const double g = enc.granularity();
  return 2.0 * range / (g * g);
}

namespace detail {

inline void accumulate(QuboMatrix& qubo, const PenaltyTerms& terms) {
  for (const auto& [i, v] : terms.diag) qubo.q[i][i] += v;
  for (const auto& [i, j, v] : terms.off_diag) {
    qubo.q[i][j] += v / 2.0;
    qubo.q[j][i] += v / 2.0;
  }
  qubo.offset += terms.constant;
}

inline double min_over_box(const std::vector<std::pair<int, double>>& coeffs) {
  double lo = 0.0;
  for (const auto& [idx, v] : coeffs)
    if (v < 0) lo += v;
  return lo;
}

}  // namespace detail

/// Compiles the master problem with the current cut set into a QUBO.
///
/// The master maximizes c'x + t(w) subject to the accumulated cuts, so the
/// QUBO minimizes -(c'x + t(w)) plus one squared penalty block per cut:
///
///   optimality cut k:  P_k (t(w) + (u^k)'A x + sum_l 2^l s_l - b'u^k)^2
///   feasibility cut j: P_j ((r^j)'A x       + sum_l 2^l s_l - b'r^j)^2
///
/// Slack registers are sized by slack_width over the binary box. When
/// inject_x_rows is set, rows of A with an all-zero G row (pure binary
/// constraints) are additionally penalized the same way; by default they are
/// left to surface through feasibility cuts.
inline std::pair<QuboMatrix, VariableLayout> build_master_qubo(
    const MilpInstance& inst, const MasterState& state, const TEncoding& enc,
    const PenaltyConfig& pen, bool inject_x_rows = false) {
  enc.validate();
  pen.validate();
  const double uniform_penalty = pen.mode == PenaltyMode::Auto
                                     ? auto_penalty(inst, state, enc)
                                     : pen.fixed_value;

  VariableLayout layout;
  layout.n = inst.n;
  layout.t_bits = enc.total_bits();

  struct PendingBlock {
    std::vector<std::pair<int, double>> coeffs;
    double rhs = 0.0;
    double penalty = 0.0;
    SlackSpec slack;
    SlackSource source = SlackSource::OptimalityCut;
    int source_index = 0;
  };
  std::vector<PendingBlock> blocks;

  auto cut_penalty = [&](std::size_t cut_index) {
    if (cut_index < pen.per_cut_values.size())
      return pen.per_cut_values[cut_index];
    return uniform_penalty;
  };

  for (std::size_t k = 0; k < state.cuts().size(); ++k) {
    const Cut& cut = state.cuts()[k];
    if (static_cast<int>(cut.dual.size()) != inst.m)
      throw DimensionError("cut vector must have length m");
    PendingBlock block;
    block.source_index = static_cast<int>(k);
    block.penalty = cut_penalty(k);
    // (u'A)_i coefficients on the x bits.
    for (int i = 0; i < inst.n; ++i) {
      double coeff = 0.0;
      for (int r = 0; r < inst.m; ++r) coeff += cut.dual[r] * inst.A[r][i];
      if (coeff != 0.0) block.coeffs.emplace_back(layout.x_index(i), coeff);
    }
    if (cut.kind == CutKind::Optimality) {
      block.source = SlackSource::OptimalityCut;
      for (int k2 = 0; k2 < enc.total_bits(); ++k2)
        block.coeffs.emplace_back(layout.w_index(k2), enc.bit_weight(k2));
    } else {
      block.source = SlackSource::FeasibilityCut;
    }
    block.rhs = detail::dot(inst.b, cut.dual);
    blocks.push_back(std::move(block));
  }

  if (inject_x_rows) {
    for (int r = 0; r < inst.m; ++r) {
      bool x_only = true;
      for (int j = 0; j < inst.p && x_only; ++j) x_only = inst.G[r][j] == 0.0;
      if (!x_only) continue;
      PendingBlock block;
      block.source = SlackSource::XRow;
      block.source_index = r;
      block.penalty = uniform_penalty;
      for (int i = 0; i < inst.n; ++i)
        if (inst.A[r][i] != 0.0)
          block.coeffs.emplace_back(layout.x_index(i), inst.A[r][i]);
      block.rhs = inst.b[r];
      blocks.push_back(std::move(block));
    }
  }

  int next = inst.n + enc.total_bits();
  const double grid = enc.granularity();
  auto on_grid = [grid](double v) {
    const double units = v / grid;
    return std::fabs(units - std::round(units)) <= 1e-9;
  };
  for (PendingBlock& block : blocks) {
    block.slack = slack_width(block.rhs, detail::min_over_box(block.coeffs));
    layout.slack_blocks.push_back(
        {block.source, block.source_index, next, block.slack});
    layout.quantization_warning |= block.slack.sub_unit_gap;
    layout.exact_penalties &= on_grid(block.rhs);
    for (const auto& [idx, v] : block.coeffs)
      if (idx < inst.n) layout.exact_penalties &= on_grid(v);
    next += block.slack.num_bits;
  }
  layout.total = next;

  QuboMatrix qubo;
  qubo.size = layout.total;
  qubo.q.assign(layout.total, std::vector<double>(layout.total, 0.0));

  // Objective block: minimize -(c'x + t(w)).
  for (int i = 0; i < inst.n; ++i)
    qubo.q[layout.x_index(i)][layout.x_index(i)] -= inst.c[i];
  for (int k = 0; k < enc.total_bits(); ++k)
    qubo.q[layout.w_index(k)][layout.w_index(k)] -= enc.bit_weight(k);

  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const PendingBlock& block = blocks[bi];
    detail::accumulate(qubo,
                       penalize_inequality(block.coeffs, block.rhs,
                                           block.penalty, block.slack,
                                           layout.slack_blocks[bi].begin));
  }
  return {std::move(qubo), std::move(layout)};
}

/// bits' Q bits + offset.
inline double qubo_energy(const QuboMatrix& qubo, const std::vector<int>& bits) {
  if (static_cast<int>(bits.size()) != qubo.size)
    throw DimensionError("bit vector length must match QUBO size");
  double energy = qubo.offset;
  for (int i = 0; i < qubo.size; ++i) {
    if (!bits[i]) continue;
    const auto& row = qubo.q[i];
    for (int j = 0; j < qubo.size; ++j)
      if (bits[j]) energy += row[j];
  }
  return energy;
}

/// Classical post-check of a sampled bitstring. Decodes x and t and tests
/// the true cut inequalities at tol 1e-6; slack bits are ignored (a valid
/// slack assignment exists exactly when the inequality holds).
struct SampleVerification {
  bool feasible = true;
  std::vector<int> violated_cuts;     // cut insertion indices
  std::vector<double> violations;     // matching shortfall amounts
  std::vector<int> x;
  double t = 0.0;
};

inline SampleVerification verify_sample(const std::vector<int>& bits,
                                        const VariableLayout& layout,
                                        const MilpInstance& inst,
                                        const MasterState& state,
                                        const TEncoding& enc) {
  if (static_cast<int>(bits.size()) != layout.total)
    throw DimensionError("bit vector length must match layout");
  constexpr double tol = 1e-6;
  SampleVerification result;
  result.x = layout.decode_x(bits);
  result.t = decode_t(layout.decode_w(bits), enc);

  const std::vector<double> d = detail::residual_rhs(inst, result.x);
  for (std::size_t k = 0; k < state.cuts().size(); ++k) {
    const Cut& cut = state.cuts()[k];
    const double lhs = detail::dot(d, cut.dual);
    const double bound = cut.kind == CutKind::Optimality ? result.t : 0.0;
    if (lhs < bound - tol) {
      result.feasible = false;
      result.violated_cuts.push_back(static_cast<int>(k));
      result.violations.push_back(bound - lhs);
    }
  }
  return result;
}

}  // namespace qbend
