#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "eigenproj/io.hpp"

namespace eigenproj {

// Everything a single CLI invocation needs. Tolerances left unset fall back
// to the backend defaults (all zero for exact, the standard floating
// thresholds otherwise).
struct RunConfig {
  std::string command;
  std::string input_path = "-";
  BackendChoice backend = BackendChoice::auto_detect;
  std::optional<double> tau_zero;
  std::optional<double> tau_rank;
  std::optional<double> tau_cluster;
  std::optional<int> u_override;
  std::optional<std::string> alpha;
  std::optional<std::string> eigenvalue_override;  // comma-separated scalars
  std::optional<std::string> fn;  // matfunc: exp | identity | poly:c0,c1,... | resolvent:z
  OutputFormat format = OutputFormat::text;
};

// Agreement threshold used by the `verify` command when comparing
// independently constructed results under floating arithmetic.
inline constexpr double kVerifyAgreement = 1e-8;

// Runs one command; writes results to out and diagnostics to err; returns
// the process exit code (0 on success, the error's code otherwise).
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// One line per exit code, for --help.
std::string exit_code_table();

}  // namespace eigenproj
