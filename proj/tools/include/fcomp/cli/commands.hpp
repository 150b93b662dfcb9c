#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "fcomp/cli/bench.hpp"

namespace fcomp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitIo = 3,
  kExitNumeric = 4,
};

struct SimulateArgs {
  std::string config;
  std::string out;
  std::optional<std::string> truth_out;  // default: <out>.truth
};

struct SolveArgs {
  std::string config;
  std::string input;
  std::optional<std::string> truth;
  std::string algorithm;
  std::optional<std::string> out;
};

struct BenchArgs {
  BenchRequest request;
  std::optional<std::string> config;
  std::string out;
  bool quiet = false;
};

// Each command throws the library exceptions; run_cli maps them to exit codes.
void cmd_simulate(const SimulateArgs& args, std::ostream& log);
void cmd_solve(const SolveArgs& args, std::ostream& out);
void cmd_bench(const BenchArgs& args, std::ostream& out);

int run_cli(int argc, char** argv);

}  // namespace fcomp::cli
