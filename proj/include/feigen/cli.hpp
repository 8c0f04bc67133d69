#pragma once

// Command-line pipelines: solve, spectrum, verify, plotdata, family.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace feigen {

enum ExitCode {
  kExitOk = 0,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitVerification = 4,
  kExitEigensolver = 5,
};

struct RunConfig {
  std::string command;
  int digits = 64;
  std::optional<std::size_t> nodes;  // 32, or 70 for extremum order >= 2
  std::optional<std::string> op;     // T, or T4 for the family command
  std::string linearization = "full";
  std::string basis = "cheb";
  std::optional<std::size_t> dim;
  std::vector<std::string> constrain;  // aJ=V, V rational
  std::vector<std::string> pins;       // g0=V or aJ=V
  int extremum_order = 1;
  std::vector<std::string> mu;
  std::string seed_file;
  std::string solution;  // coefficient file to verify instead of solving
  std::string jacobian = "fd";
  std::string format = "json";
  std::string out;
  std::string run_dir;
  bool extrapolate = false;
  bool inexact = false;
  std::size_t eigenfunctions = 11;
};

/// Parses argv and runs one command.  Reports go to `out` (or --out), a
/// structured error object {code, message, hint} goes to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

/// Runs an already-parsed configuration.
int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace feigen
