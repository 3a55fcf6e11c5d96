#pragma once

// Command-line front end. parse_args validates everything before run touches the file system.
//
// Exit codes: 0 success, 1 usage error or refused overwrite, 2 numeric failure
// (non-convergence, failed verification, invariant violated inside a module), 3 I/O error.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "thetacurve/completion.hpp"
#include "thetacurve/error.hpp"
#include "thetacurve/extremal.hpp"

namespace thetacurve::cli {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct ExtremalArgs {
  ExtremalSpec spec;
  std::size_t samples = 8192;
  std::optional<double> margin;
};

struct CompleteArgs {
  CompletionProblem problem;
};

struct LiftArgs {
  std::string curve_path;
  double a = 1.0;
};

struct SurfaceArgs {
  ExtremalSpec spec;
  std::size_t samples = 2048;
  std::size_t angles = 64;
  std::optional<double> margin;
  double sweep_degrees = 360.0;
};

struct VerifyArgs {
  std::string curve_path;
  std::optional<double> a;
  std::optional<double> delta;
  std::optional<std::string> meta_path;
  bool fit_delta = false;
  bool profile = false;
};

struct SweepArgs {
  std::vector<double> a_values{0.5, 1.0, 2.0};
  std::vector<double> d_ratios{1.5};
  std::vector<Family> families{Family::Sinh, Family::Cosh, Family::Exp};
  std::size_t samples = 2048;
  std::size_t threads = 0;  ///< 0 means one per hardware thread
};

struct CliConfig {
  std::string subcommand;
  std::variant<ExtremalArgs, CompleteArgs, LiftArgs, SurfaceArgs, VerifyArgs, SweepArgs> params;
  std::string out_prefix;  ///< empty only for verify, which then writes to stdout alone
  bool force = false;
  bool svg = false;
};

/// argv without the program name. `--config <path>` may appear anywhere; its key=value lines
/// are applied before the command-line flags, which win. Throws UsageError naming the flag or
/// bound at fault.
CliConfig parse_args(const std::vector<std::string>& args);

/// Executes a validated config. Data goes to files (and to `out` for verify); diagnostics go to `err`.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code mapping above.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thetacurve::cli
