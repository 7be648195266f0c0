#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitfam/verify_gig.hpp"

namespace orbitfam::cli {

inline constexpr const char* kToolName = "orbitfam";
inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitVerificationFailed = 1,
  kExitInputError = 2,
  kExitNegative = 3,
  kExitOutsideTheta = 4,
};

struct CommandResult {
  int exit_code = kExitSuccess;
  std::string out;  // standard output
  std::string err;  // standard error
};

/// Well-definedness, cyclicity, conditions A and B and injectivity, as a JSON report.
CommandResult cmd_check(const std::string& spec_path);

/// Intertwiner search and same-family comparison between two cyclic pairs.
CommandResult cmd_equiv(const std::string& spec_a, const std::string& spec_b);

struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

/// Parses "lo:hi:n". Throws InvalidInput.
GridRange parse_grid(const std::string& text);
/// Parses a comma separated list of reals. Throws InvalidInput.
std::vector<double> parse_reals(const std::string& text);

struct FamilyArgs {
  std::string spec_path;
  std::vector<double> theta;  // xi components followed by character coefficients
  std::optional<GridRange> grid;
  std::optional<std::size_t> sample_count;
  std::uint64_t seed = 1;
};

/// Grid mode writes "x,pdf" CSV, sample mode one draw per line; phi goes to
/// standard error.
CommandResult cmd_family(const FamilyArgs& args);

/// Runs verify_gig and prints a per-case table (or the JSON report).
CommandResult cmd_verify_gig(const VerifyGigOptions& options, bool json);

/// Full command line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orbitfam::cli
