#pragma once

// Command-line front end. Parsing and dispatch live in the library so tests
// can drive them without a subprocess.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ggexp/io.hpp"

namespace ggexp {

enum class Command { kEval, kQuad, kTransform, kVerify };
enum class OutputFormat { kText, kCsv, kJson };

std::string_view to_string(Command c);
std::string_view to_string(OutputFormat f);

/// Exit statuses of `run`.
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::kEval;
  double lambda = 0.5;
  double mu = 0.0;
  // eval
  int n = 0;
  double t = 0.0;
  bool orthonormal = false;
  // quad
  int points = 0;
  // transform
  int degree = 0;
  std::string input;
  // verify
  std::string check;
  std::string theorem = "HY";
  std::optional<double> p, s, q, r;
  std::optional<int> nmin, nmax;
  int trials = 100;
  std::string family = "mixed";
  double rel_tol = 1e-11;
  // shared
  std::uint64_t seed = 0;
  std::string out;
  std::string plot;
  std::string trials_csv;
  std::optional<OutputFormat> format;
};

Json to_json(const RunConfig& config);

/// Parses argv into `config`. Returns nullopt when the command should run,
/// otherwise the exit status (0 after --help, 2 on a usage error).
std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                                      std::ostream& err);

/// Dispatches to the library and writes outputs. Returns 0 on pass, 1 when a
/// verification fails, 2 on usage or domain errors, 3 on numerical failures.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line followed by run.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ggexp
