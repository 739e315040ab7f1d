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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbend/encoding.hpp"
#include "qbend/errors.hpp"
#include "qbend/model.hpp"
#include "qbend/oracle.hpp"
#include "qbend/qubo.hpp"
#include "qbend/samplers.hpp"
#include "qbend/subproblem.hpp"

namespace qbend {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Solver configuration. `encoding` empty means choose_default_encoding.
/// inject_x_rows additionally penalizes pure-binary rows of A inside the
/// master instead of waiting for feasibility cuts to exclude them.
struct SolveConfig {
  double epsilon = 1e-6;
  int max_iters = 50;
  std::optional<TEncoding> encoding;
  PenaltyConfig penalties;
  SamplerParams sampler;
  bool inject_x_rows = false;

  void validate() const {
    if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (encoding) encoding->validate();
    penalties.validate();
    sampler.validate();
  }
};

enum class CutAdded { ExtremePoint, ExtremeRay, None };

/// One loop iteration. t_upper is the decoded master value t(w); t_lower is
/// the subproblem value z_LP(x), -inf when the subproblem found a ray (or
/// was skipped on a penalty-escalation retry). Records are append-only and
/// strictly increasing in iter.
struct IterationRecord {
  int iter = 0;
  std::vector<int> x;
  double t_upper = kInf;
  double t_lower = -kInf;
  CutAdded cut_added = CutAdded::None;
  int qubo_size = 0;
  double sampler_energy = 0.0;
  bool master_feasible = true;
  double penalty_used = 0.0;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, MasterStuck };

struct SolveReport {
  SolveStatus status = SolveStatus::IterationLimit;
  std::vector<int> x_star;
  std::vector<double> y_star;
  double objective = 0.0;
  std::vector<IterationRecord> trace;
  std::string stop_reason;
};

/// |t_upper - t_lower|, +inf when either bound is infinite.
inline double bounds_gap(double t_upper, double t_lower) {
  if (!std::isfinite(t_upper) || !std::isfinite(t_lower)) return kInf;
  return std::fabs(t_upper - t_lower);
}

inline const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::IterationLimit: return "IterationLimit";
    case SolveStatus::MasterStuck: return "MasterStuck";
  }
  return "Unknown";
}

inline const char* to_string(CutAdded cut) {
  switch (cut) {
    case CutAdded::ExtremePoint: return "ExtremePoint";
    case CutAdded::ExtremeRay: return "ExtremeRay";
    case CutAdded::None: return "None";
  }
  return "Unknown";
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + salt * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Runs the decomposition loop: compile the master with the current cuts
/// into a QUBO, sample it, verify the sample classically, then solve the
/// dual subproblem at the decoded x. A dual ray joins the feasibility cuts;
/// a dual vertex updates the lower bound and (after the first iteration,
/// whose master value is only the encoding ceiling) joins the optimality
/// cuts. Terminates when the bound gap closes, when the subproblem certifies
/// that no violated cut exists, or on one of the failure paths below.
inline SolveReport run(const MilpInstance& inst, const SolveConfig& cfg) {
  inst.validate();
  cfg.validate();

  const TEncoding enc = cfg.encoding ? *cfg.encoding
                                     : choose_default_encoding(inst);
  const double certified_penalty = auto_penalty(inst, MasterState{}, enc);
  double base_penalty = cfg.penalties.mode == PenaltyMode::Auto
                            ? certified_penalty
                            : cfg.penalties.fixed_value;
  double penalty_scale = 1.0;
  int escalations = 0;
  Backend backend = cfg.sampler.backend;

  MasterState state;
  SolveReport report;
  double t_lower = -kInf;
  double t_upper = kInf;

  std::vector<int> prev_bits;
  bool prev_made_progress = true;
  bool stall_escalated = false;

  auto finish_optimal = [&](const std::vector<int>& x,
                            const std::string& reason) {
    PrimalLpResult lp = solve_primal_lp(inst, x);
    if (lp.status != LpSolveStatus::Optimal)
      throw NumericalError("y recovery failed at the reported optimum");
    report.status = SolveStatus::Optimal;
    report.x_star = x;
    report.y_star = lp.y;
    report.objective = evaluate_objective(inst, x, lp.y);
    report.stop_reason = reason;
    if (!check_feasible(inst, x, lp.y, 1e-6))
      throw NumericalError("reported optimum fails the feasibility check");
  };

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    PenaltyConfig effective = cfg.penalties;
    effective.mode = PenaltyMode::Fixed;
    effective.fixed_value = base_penalty * penalty_scale;
    for (double& v : effective.per_cut_values) v *= penalty_scale;

    QuboMatrix qubo;
    VariableLayout layout;
    try {
      std::tie(qubo, layout) =
          build_master_qubo(inst, state, enc, effective, cfg.inject_x_rows);
    } catch (const InfeasibleConstraintError&) {
      // A cut excludes the whole binary box: the MILP itself is infeasible.
      report.status = SolveStatus::Infeasible;
      report.stop_reason = "cut unsatisfiable over the binary box";
      return report;
    }

    SamplerParams params = cfg.sampler;
    params.backend = backend;
    params.seed = detail::mix_seed(cfg.sampler.seed,
                                   static_cast<std::uint64_t>(iter));
    SampleResult best = sample(qubo, params);
    if (std::fabs(qubo_energy(qubo, best.bits) - best.energy) > 1e-9)
      throw NumericalError("sampler energy fails recomputation");

    SampleVerification verified =
        verify_sample(best.bits, layout, inst, state, enc);

    IterationRecord record;
    record.iter = iter;
    record.x = verified.x;
    record.t_upper = verified.t;
    record.qubo_size = layout.total;
    record.sampler_energy = best.energy;
    record.master_feasible = verified.feasible;
    record.penalty_used = effective.fixed_value;

    if (!verified.feasible) {
      if (backend == Backend::Exhaustive && layout.exact_penalties &&
          effective.fixed_value >= certified_penalty - kTol) {
        // The exact optimum still violates a cut, penalties vanish exactly
        // on feasible assignments, and the penalty level dominates the
        // objective range: no binary assignment satisfies the cut set.
        report.status = SolveStatus::Infeasible;
        report.stop_reason = "cuts exclude every binary assignment";
        report.trace.push_back(std::move(record));
        return report;
      }
      if (escalations < cfg.penalties.max_escalations) {
        ++escalations;
        penalty_scale *= cfg.penalties.escalation_factor;
        record.t_lower = -kInf;
        report.trace.push_back(std::move(record));
        continue;
      }
      if (backend == Backend::SimulatedAnnealing && layout.total <= 24) {
        backend = Backend::Exhaustive;
        report.trace.push_back(std::move(record));
        continue;
      }
      report.status = SolveStatus::MasterStuck;
      report.stop_reason = "penalty escalation exhausted";
      report.trace.push_back(std::move(record));
      return report;
    }

    // Stall guard: the same verified sample twice in a row without a new cut
    // means the master cannot move; harden the penalties, then fall back to
    // the exact backend when the problem is small enough.
    if (best.bits == prev_bits && !prev_made_progress) {
      if (!stall_escalated) {
        stall_escalated = true;
        penalty_scale *= cfg.penalties.escalation_factor;
      } else if (backend == Backend::SimulatedAnnealing &&
                 layout.total <= 24) {
        backend = Backend::Exhaustive;
      } else {
        report.status = SolveStatus::MasterStuck;
        report.stop_reason = "master repeated a sample without progress";
        report.trace.push_back(std::move(record));
        return report;
      }
    }
    prev_bits = best.bits;

    // First-iteration master values only reflect the encoding ceiling, so
    // they stand in for the +inf initialization: no optimality cut may be
    // generated from them and the bound gap stays infinite.
    const bool upper_bound_real = iter > 1;
    if (upper_bound_real) t_upper = verified.t;

    DualOutcome dual = solve_dual(inst, verified.x);
    bool made_progress = false;

    if (dual.status == DualStatus::DualInfeasible) {
      report.status = SolveStatus::Unbounded;
      report.stop_reason = "dual subproblem infeasible";
      report.trace.push_back(std::move(record));
      return report;
    }

    if (dual.status == DualStatus::UnboundedBelow) {
      t_lower = -kInf;
      record.t_lower = -kInf;
      const bool added = state.add_cut({CutKind::Feasibility, dual.ray});
      record.cut_added = added ? CutAdded::ExtremeRay : CutAdded::None;
      made_progress = added;
    } else {
      t_lower = dual.z;
      record.t_lower = dual.z;
      if (dual.z >= verified.t - cfg.epsilon) {
        // No cut is violated at x: standard optimality certificate. A
        // subproblem value beyond the representable range means the t
        // register clipped the master, so the answer is only best-in-range.
        record.cut_added = CutAdded::None;
        report.trace.push_back(std::move(record));
        const bool saturated = dual.z > t_range(enc).second + cfg.epsilon;
        finish_optimal(verified.x,
                       saturated
                           ? "no violated cut at x (t register saturated)"
                           : "subproblem certifies optimality");
        return report;
      }
      if (upper_bound_real) {
        const bool added = state.add_cut({CutKind::Optimality, dual.u});
        record.cut_added = added ? CutAdded::ExtremePoint : CutAdded::None;
        made_progress = added;
      } else {
        record.cut_added = CutAdded::None;
        made_progress = true;  // the first-iteration guard is not a stall
      }
    }
    prev_made_progress = made_progress;
    report.trace.push_back(std::move(record));

    if (bounds_gap(upper_bound_real ? t_upper : kInf, t_lower) < cfg.epsilon) {
      finish_optimal(verified.x, "bound gap closed");
      return report;
    }
  }

  report.status = SolveStatus::IterationLimit;
  report.stop_reason = "iteration limit reached";
  if (!report.trace.empty()) report.x_star = report.trace.back().x;
  return report;
}

/// One JSONL line per iteration record plus a final summary line.
inline std::string trace_to_jsonl(const SolveReport& report) {
  std::string out;
  auto finite_or_null = [](double v) {
    nlohmann::ordered_json j;
    if (std::isfinite(v))
      j = v;
    else
      j = nullptr;
    return j;
  };
  for (const IterationRecord& rec : report.trace) {
    nlohmann::ordered_json j;
    j["iter"] = rec.iter;
    j["x"] = rec.x;
    j["t_upper"] = finite_or_null(rec.t_upper);
    j["t_lower"] = finite_or_null(rec.t_lower);
    j["cut_added"] = to_string(rec.cut_added);
    j["qubo_size"] = rec.qubo_size;
    j["sampler_energy"] = rec.sampler_energy;
    j["master_feasible"] = rec.master_feasible;
    j["penalty_used"] = rec.penalty_used;
    out += j.dump();
    out += '\n';
  }
  nlohmann::ordered_json summary;
  summary["status"] = to_string(report.status);
  summary["x_star"] = report.x_star;
  summary["y_star"] = report.y_star;
  summary["objective"] = report.status == SolveStatus::Optimal
                             ? nlohmann::ordered_json(report.objective)
                             : nlohmann::ordered_json(nullptr);
  summary["iterations"] = report.trace.size();
  summary["stop_reason"] = report.stop_reason;
  out += summary.dump();
  out += '\n';
  return out;
}

}  // namespace qbend
