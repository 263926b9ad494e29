// Command-line front end: flag parsing with optional JSON config-file
// defaults, domain re-validation with structured usage errors, and the
// subcommand implementations that emit JSON reports and CSV tables.
//
// The front end is a thin shell over the library: every number it prints
// is produced by the library functions, every output is deterministic for
// a fixed configuration and seed, and JSON reports echo the fully resolved
// configuration so the artifact describes itself.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "wishrisk/cone.hpp"
#include "wishrisk/montecarlo.hpp"
#include "wishrisk/regions.hpp"
#include "wishrisk/types.hpp"

namespace wishrisk {

/// Configuration or domain problem detected before any computation runs;
/// mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Subcommand { kPriors, kRisk, kScan, kMc, kAsympt, kSample };

/// Geometric sweep min, min*g, ..., max with the endpoints hit exactly.
struct SweepSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
};

/// Fully resolved invocation.  Every constraint the downstream modules
/// enforce has already been re-checked when parse_and_validate returns one
/// of these, so execute only encounters numerical failures (exit 3), never
/// domain violations.
struct RunConfig {
  Subcommand subcommand = Subcommand::kPriors;

  // Set when the invocation only asks for help; execute prints help_text
  // and succeeds without computing anything.
  bool show_help = false;
  std::string help_text;

  int d = 1;
  int r = 1;
  std::vector<int> partition;  // block sizes; defaults to the single block
  int k = 0;                   // two-block split for scan

  double mu = 0.0;
  double nu = 0.0;
  std::vector<double> mu_list;  // scan: uniform-dominance estimate

  std::string t_source;  // named kind or explicit list, as given
  HyperT t;              // resolved exponents

  GridSpec grid;    // scan
  SweepSpec sweep;  // asympt

  McConfig mc;           // mc and sample (seed)
  std::int64_t count = 0;  // sample: number of draws
  int threads = 0;         // 0 = environment or hardware default

  std::string xi_path;      // empty: identity scale
  RealMatrix xi_real;       // parsed matrix when d = 1
  ComplexMatrix xi_complex;  // parsed matrix when d = 2

  std::string output_path;  // empty: standard output
};

/// Parses an argument vector (without the program name) into a validated
/// RunConfig.  A `--config file.json` option names a JSON object whose
/// entries are long option names; they act as defaults that explicit flags
/// override.  Throws UsageError on any parse or domain problem, with the
/// violated constraint named in the message.
RunConfig parse_and_validate(const std::vector<std::string>& args);

/// Runs the subcommand, writing its report to out (or to the configured
/// output path when one is set).  Returns the process exit status.  May
/// throw NumericalError for failures only detectable at execution time,
/// such as a scale matrix file that is not positive definite.
int execute(const RunConfig& cfg, std::ostream& out);

/// Full front end: parse, validate, execute, and map failures to the exit
/// code contract (0 success, 2 usage or domain, 3 numerical).  Diagnostics
/// go to err, reports to out.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace wishrisk
