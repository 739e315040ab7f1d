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

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string stdout_text;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Runs the CLI with stdout captured to a temp file; stderr is discarded.
CommandResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_path =
      std::string("cli_test_out_") + std::to_string(counter++) + ".txt";
  const std::string command = std::string(QBEND_CLI_PATH) + " " + args + " > " +
                              out_path + " 2>/dev/null";
  const int raw = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WEXITSTATUS(raw);
  result.stdout_text = read_file(out_path);
  std::remove(out_path.c_str());
  return result;
}

const std::string kPaperInstance =
    std::string(QBEND_REPO_DIR) + "/examples/paper_instance.json";

}  // namespace

TEST_CASE("solve reports the worked example optimum") {
  const CommandResult result =
      run_cli("solve --instance " + kPaperInstance + " --backend exhaustive");
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("status=Optimal") != std::string::npos);
  CHECK(result.stdout_text.find("x=[1,0]") != std::string::npos);
  CHECK(result.stdout_text.find("objective=2") != std::string::npos);
}

TEST_CASE("solve on a missing file is a usage error") {
  const CommandResult result = run_cli("solve --instance missing.json");
  CHECK(result.exit_code == 4);
}

TEST_CASE("solve with a seeded SA backend is byte-identical across runs") {
  const std::string trace_a = "cli_trace_a.jsonl";
  const std::string trace_b = "cli_trace_b.jsonl";
  const std::string args = "solve --instance " + kPaperInstance +
                           " --backend sa --seed 7 --trace ";
  const CommandResult first = run_cli(args + trace_a);
  const CommandResult second = run_cli(args + trace_b);
  CHECK(first.exit_code == 0);
  CHECK(second.exit_code == 0);
  CHECK(first.stdout_text == second.stdout_text);
  CHECK(read_file(trace_a) == read_file(trace_b));
  CHECK_FALSE(read_file(trace_a).empty());
  std::remove(trace_a.c_str());
  std::remove(trace_b.c_str());
}

TEST_CASE("oracle prints the enumerated optimum") {
  const CommandResult result =
      run_cli("oracle --instance " + kPaperInstance);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("status=Optimal") != std::string::npos);
  CHECK(result.stdout_text.find("x=[1,0]") != std::string::npos);
  CHECK(result.stdout_text.find("objective=2") != std::string::npos);
}

TEST_CASE("oracle exit codes follow the instance status") {
  const CommandResult infeasible = run_cli(
      "oracle --instance " + std::string(QBEND_REPO_DIR) +
      "/examples/infeasible_toy.json");
  CHECK(infeasible.exit_code == 1);
  CHECK(infeasible.stdout_text.find("status=Infeasible") != std::string::npos);

  const CommandResult unbounded = run_cli(
      "oracle --instance " + std::string(QBEND_REPO_DIR) +
      "/examples/unbounded_toy.json");
  CHECK(unbounded.exit_code == 2);
}

TEST_CASE("oracle rejects instances beyond the enumeration guard") {
  // Build a 21-binary instance on the fly.
  const std::string path = "cli_too_large.json";
  {
    std::ofstream out(path);
    out << R"({"n":21,"p":0,"m":1,"c":[)";
    for (int i = 0; i < 21; ++i) out << (i ? ",1" : "1");
    out << R"(],"h":[],"A":[[)";
    for (int i = 0; i < 21; ++i) out << (i ? ",1" : "1");
    out << R"(]],"G":[[]],"b":[5]})";
  }
  const CommandResult result = run_cli("oracle --instance " + path);
  CHECK(result.exit_code == 4);
  std::remove(path.c_str());
}

TEST_CASE("qubo-dump emits the documented header and legend") {
  const CommandResult result = run_cli(
      "qubo-dump --instance " + kPaperInstance + " --bits-int 4");
  CHECK(result.exit_code == 0);
  std::istringstream lines(result.stdout_text);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "8 0");
  int entries = 0, legend = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("# ", 0) == 0)
      ++legend;
    else
      ++entries;
  }
  CHECK(entries == 8);  // diagonal only: objective block with no cuts
  CHECK(legend == 8);   // one name per bit

  const CommandResult repeat = run_cli(
      "qubo-dump --instance " + kPaperInstance + " --bits-int 4");
  CHECK(repeat.stdout_text == result.stdout_text);
}

TEST_CASE("qubo-dump accepts a cut-state file") {
  const std::string cuts_path = "cli_cuts.json";
  {
    std::ofstream out(cuts_path);
    out << R"({"optimality":[[8,0,0,9,0,0,0,0,0]],)"
        << R"("feasibility":[[0,0,0,0,1,0,0,0,0]]})";
  }
  const CommandResult result = run_cli("qubo-dump --instance " +
                                       kPaperInstance + " --bits-int 4 --cuts " +
                                       cuts_path);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("s.optimality0") != std::string::npos);
  CHECK(result.stdout_text.find("s.feasibility1") != std::string::npos);
  std::remove(cuts_path.c_str());
}

TEST_CASE("unknown flags are usage errors") {
  const CommandResult result = run_cli("solve --no-such-flag");
  CHECK(result.exit_code == 4);
}
