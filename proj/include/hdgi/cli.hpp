#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdgi/assembly.hpp"
#include "hdgi/error.hpp"
#include "hdgi/solver.hpp"

namespace hdgi::cli {

enum class Command { solve, convergence, verify };

struct RunConfig {
  Command command = Command::solve;
  std::string preset = "example1";
  ElementKind element = ElementKind::rectangle;
  Scheme scheme = Scheme::primary;
  std::optional<double> eta;
  int n = 16;
  std::vector<int> levels;
  SolverMethod solver = SolverMethod::direct;
  double tol = 1e-12;
  std::optional<std::string> out;
};

enum ExitCode : int { ok = 0, config_error = 2, alignment_error = 3, solver_failure = 4 };

int exit_code_for(ErrorCode code);

/// Parses argv into a RunConfig. Returns the exit code to use when parsing
/// ends the run (help, bad flags) and nullopt otherwise.
std::optional<int> parse(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                         std::ostream& err);

/// Throws hdgi::Error on a bad level list.
std::vector<int> resolve_levels(const RunConfig& config);

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_convergence(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command and maps library errors to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace hdgi::cli
