#pragma once

#include <string>
#include <vector>

#include "clustersense/cli/config.hpp"
#include "clustersense/mcsim.hpp"

namespace clustersense::cli {

enum ExitCode : int { kExitOk = 0, kExitValidationFailed = 1, kExitConfigError = 2 };

struct CommandResult {
  std::string csv;
  std::string summary;
  int exit_code = kExitOk;
};

/// Probabilities and other reals in CSV cells: 12 significant digits.
std::string format_prob(double value);

CommandResult run_sweep(const RunConfig& config);
CommandResult run_optimize(const RunConfig& config);
CommandResult run_validate(const RunConfig& config);
CommandResult run_calibrate(const RunConfig& config);

/// One Monte Carlo agreement check of the validation grid.
struct ValidationRow {
  std::string scope;     // per_su | fused
  std::string quantity;  // pd | pf
  int sensing_symbols = 1;
  double gamma_db = 0.0;
  double pd_target = 0.0;
  FusionRule rule = FusionRule::Or;
  int cluster_size = 1;
  double threshold = 0.0;
  double analytic = 0.0;
  McEstimate first;
  bool first_pass = false;
  bool rerun = false;
  McEstimate second;
  bool second_pass = false;

  bool passed() const { return first_pass || (rerun && second_pass); }
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  std::size_t first_pass_failures = 0;
  std::size_t final_failures = 0;
  /// Overall verdict: at most one check may still fail after its re-run.
  bool passed = false;
};

inline constexpr std::size_t kMaxMarginalFailures = 1;

/// |estimate - analytic| within the larger of the estimate's and the
/// analytic value's 3-sigma binomial half-width; an all-or-nothing count
/// widens this to 3 / trials.
bool agrees(const McEstimate& estimate, double analytic);

ValidationReport run_validation_grid(const RunConfig& config);

std::string validation_csv(const ValidationReport& report);

}  // namespace clustersense::cli
