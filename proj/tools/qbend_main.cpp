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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbend/qbend.hpp"

namespace {

// Exit codes: 0 Optimal, 1 Infeasible, 2 Unbounded,
// 3 IterationLimit/MasterStuck, 4 usage or parse error, 5 numerical error.
constexpr int kExitOptimal = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUnbounded = 2;
constexpr int kExitStalled = 3;
constexpr int kExitUsage = 4;
constexpr int kExitNumerical = 5;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string format_number_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
std::string format_vector(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_number(static_cast<double>(v[i]));
  }
  out += "]";
  return out;
}

qbend::MilpInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qbend::ParseError("cannot open instance file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return qbend::parse_instance(buffer.str());
}

struct EncodingFlags {
  int bits_int = -1;
  int bits_frac = -1;
  int bits_neg = -1;

  std::optional<qbend::TEncoding> to_encoding() const {
    if (bits_int < 0 && bits_frac < 0 && bits_neg < 0) return std::nullopt;
    qbend::TEncoding enc;
    enc.max_pos_exp = std::max(bits_int, 0);
    enc.frac_bits = std::max(bits_frac, 0);
    enc.max_neg_exp = std::max(bits_neg, 0);
    return enc;
  }
};

void add_encoding_flags(CLI::App* cmd, EncodingFlags& flags) {
  cmd->add_option("--bits-int", flags.bits_int,
                  "Highest positive power of two in the t register");
  cmd->add_option("--bits-frac", flags.bits_frac,
                  "Fractional bits in the t register");
  cmd->add_option("--bits-neg", flags.bits_neg,
                  "Highest negative-block power of two in the t register");
}

qbend::PenaltyConfig parse_penalty(const std::string& text) {
  qbend::PenaltyConfig pen;
  if (text == "auto") {
    pen.mode = qbend::PenaltyMode::Auto;
    return pen;
  }
  try {
    std::size_t used = 0;
    pen.fixed_value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw qbend::ConfigError("--penalty expects a positive real or 'auto'");
  }
  pen.mode = qbend::PenaltyMode::Fixed;
  return pen;
}

int exit_code(qbend::SolveStatus status) {
  switch (status) {
    case qbend::SolveStatus::Optimal: return kExitOptimal;
    case qbend::SolveStatus::Infeasible: return kExitInfeasible;
    case qbend::SolveStatus::Unbounded: return kExitUnbounded;
    case qbend::SolveStatus::IterationLimit:
    case qbend::SolveStatus::MasterStuck: return kExitStalled;
  }
  return kExitNumerical;
}

int cmd_solve(const std::string& instance_path, const std::string& backend,
              double epsilon, int max_iters, const EncodingFlags& enc_flags,
              const std::string& penalty, std::uint64_t seed, int reads,
              int sweeps, const std::string& trace_path, bool inject_x_rows) {
  qbend::MilpInstance inst = load_instance(instance_path);

  qbend::SolveConfig cfg;
  cfg.epsilon = epsilon;
  cfg.max_iters = max_iters;
  cfg.encoding = enc_flags.to_encoding();
  cfg.penalties = parse_penalty(penalty);
  cfg.sampler.backend = backend == "sa" ? qbend::Backend::SimulatedAnnealing
                                        : qbend::Backend::Exhaustive;
  cfg.sampler.seed = seed;
  cfg.sampler.num_reads = reads;
  cfg.sampler.sweeps = sweeps;
  cfg.inject_x_rows = inject_x_rows;

  qbend::SolveReport report = qbend::run(inst, cfg);

  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw qbend::ConfigError("cannot open trace file: " + trace_path);
    out << qbend::trace_to_jsonl(report);
  }

  if (report.status == qbend::SolveStatus::Optimal) {
    // Never print an infeasible answer: re-validate before reporting.
    if (!qbend::check_feasible(inst, report.x_star, report.y_star, 1e-6)) {
      std::cerr << "error: reported optimum failed re-validation\n";
      return kExitNumerical;
    }
    if (report.stop_reason.find("saturated") != std::string::npos)
      std::cerr << "warning: the t register saturated; the answer is only "
                   "best-in-range (raise --bits-int/--bits-neg)\n";
    std::cout << "status=Optimal x=" << format_vector(report.x_star)
              << " y=" << format_vector(report.y_star)
              << " objective=" << format_number(report.objective)
              << " iterations=" << report.trace.size() << "\n";
  } else {
    std::cout << "status=" << qbend::to_string(report.status)
              << " iterations=" << report.trace.size() << "\n";
  }
  return exit_code(report.status);
}

int cmd_oracle(const std::string& instance_path) {
  qbend::MilpInstance inst = load_instance(instance_path);
  qbend::BruteForceResult result = qbend::brute_force_milp(inst);
  switch (result.status) {
    case qbend::MilpStatus::Optimal:
      std::cout << "status=Optimal x=" << format_vector(result.x)
                << " y=" << format_vector(result.y)
                << " objective=" << format_number(result.objective) << "\n";
      return kExitOptimal;
    case qbend::MilpStatus::Infeasible:
      std::cout << "status=Infeasible\n";
      return kExitInfeasible;
    case qbend::MilpStatus::Unbounded:
      std::cout << "status=Unbounded\n";
      return kExitUnbounded;
  }
  return kExitNumerical;
}

qbend::MasterState load_cut_state(const std::string& path, int m) {
  qbend::MasterState state;
  if (path.empty()) return state;
  std::ifstream in(path);
  if (!in) throw qbend::ParseError("cannot open cut file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw qbend::ParseError(std::string("invalid cut file: ") + e.what());
  }
  auto add_all = [&](const char* key, qbend::CutKind kind) {
    if (!j.contains(key)) return;
    for (const auto& vec : j.at(key)) {
      qbend::Cut cut{kind, vec.get<std::vector<double>>()};
      if (static_cast<int>(cut.dual.size()) != m)
        throw qbend::DimensionError("cut vector must have length m");
      state.add_cut(cut);
    }
  };
  add_all("optimality", qbend::CutKind::Optimality);
  add_all("feasibility", qbend::CutKind::Feasibility);
  return state;
}

int cmd_qubo_dump(const std::string& instance_path,
                  const std::string& cuts_path,
                  const EncodingFlags& enc_flags, const std::string& penalty,
                  const std::string& output_path, bool inject_x_rows) {
  qbend::MilpInstance inst = load_instance(instance_path);
  qbend::MasterState state = load_cut_state(cuts_path, inst.m);
  qbend::TEncoding enc = enc_flags.to_encoding().value_or(
      qbend::choose_default_encoding(inst));
  auto [qubo, layout] = qbend::build_master_qubo(
      inst, state, enc, parse_penalty(penalty), inject_x_rows);

  std::ostringstream out;
  out << qubo.size << " " << format_number_exact(qubo.offset) << "\n";
  for (int i = 0; i < qubo.size; ++i) {
    for (int j = i; j < qubo.size; ++j) {
      // Combined coefficient of z_i z_j: energy = sum_{i<=j} v_ij z_i z_j.
      const double v = qubo.q[i][j] * (i == j ? 1.0 : 2.0);
      if (v != 0.0)
        out << i << " " << j << " " << format_number_exact(v) << "\n";
    }
  }
  for (int i = 0; i < layout.n; ++i)
    out << "# " << layout.x_index(i) << " x" << i << "\n";
  for (int k = 0; k < layout.t_bits; ++k)
    out << "# " << layout.w_index(k) << " w" << k << "\n";
  for (const auto& block : layout.slack_blocks) {
    const char* tag = block.source == qbend::SlackSource::OptimalityCut
                          ? "optimality"
                          : block.source == qbend::SlackSource::FeasibilityCut
                                ? "feasibility"
                                : "xrow";
    for (int l = 0; l < block.spec.num_bits; ++l)
      out << "# " << block.begin + l << " s." << tag << block.source_index
          << "." << l << "\n";
  }

  if (output_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(output_path);
    if (!file)
      throw qbend::ConfigError("cannot open output file: " + output_path);
    file << out.str();
  }
  if (layout.quantization_warning)
    std::cerr << "warning: a slack register has a sub-unit gap; rely on the "
                 "classical feasibility check\n";
  return kExitOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benders decomposition MILP solver with a QUBO master problem"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string backend = "exhaustive";
  double epsilon = 1e-6;
  int max_iters = 50;
  EncodingFlags enc_flags;
  std::string penalty = "auto";
  std::uint64_t seed = 0;
  int reads = 100;
  int sweeps = 2000;
  std::string trace_path;
  bool inject_x_rows = false;

  CLI::App* solve = app.add_subcommand("solve", "Run the decomposition loop");
  solve->add_option("--instance", instance_path, "Instance JSON file")
      ->required();
  solve->add_option("--backend", backend, "QUBO backend: exhaustive|sa")
      ->check(CLI::IsMember({"exhaustive", "sa"}));
  solve->add_option("--epsilon", epsilon, "Bound-gap convergence tolerance");
  solve->add_option("--max-iters", max_iters, "Iteration limit");
  add_encoding_flags(solve, enc_flags);
  solve->add_option("--penalty", penalty, "Penalty weight (real or 'auto')");
  solve->add_option("--seed", seed, "Sampler seed");
  solve->add_option("--reads", reads, "Annealing reads per master solve");
  solve->add_option("--sweeps", sweeps, "Annealing sweeps per read");
  solve->add_option("--trace", trace_path, "Write a JSONL iteration trace");
  solve->add_flag("--inject-x-rows", inject_x_rows,
                  "Penalize pure-binary rows of A inside the master");

  std::string oracle_instance;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Enumerate the exact optimum (n <= 20)");
  oracle->add_option("--instance", oracle_instance, "Instance JSON file")
      ->required();

  std::string dump_instance;
  std::string dump_cuts;
  std::string dump_output;
  EncodingFlags dump_enc_flags;
  std::string dump_penalty = "auto";
  bool dump_inject = false;
  CLI::App* dump =
      app.add_subcommand("qubo-dump", "Print the compiled master QUBO");
  dump->add_option("--instance", dump_instance, "Instance JSON file")
      ->required();
  dump->add_option("--cuts", dump_cuts,
                   "Optional cut-state JSON file "
                   "({\"optimality\":[[...]],\"feasibility\":[[...]]})");
  add_encoding_flags(dump, dump_enc_flags);
  dump->add_option("--penalty", dump_penalty, "Penalty weight (real or 'auto')");
  dump->add_option("--output", dump_output, "Write to a file instead of stdout");
  dump->add_flag("--inject-x-rows", dump_inject,
                 "Penalize pure-binary rows of A inside the master");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (solve->parsed())
      return cmd_solve(instance_path, backend, epsilon, max_iters, enc_flags,
                       penalty, seed, reads, sweeps, trace_path,
                       inject_x_rows);
    if (oracle->parsed()) return cmd_oracle(oracle_instance);
    if (dump->parsed())
      return cmd_qubo_dump(dump_instance, dump_cuts, dump_enc_flags,
                           dump_penalty, dump_output, dump_inject);
  } catch (const qbend::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qbend::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qbend::ValueError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qbend::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qbend::TooLargeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qbend::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
