#pragma once

// Flat key=value run configuration shared by every subcommand.
//
//   # comment
//   sensing_period = 100
//   gamma_db = -5, 0, 5
//
// Values come from an optional config file and then from command-line
// overrides; every key has a default. The manifest written next to each
// output uses the same syntax, so any manifest is itself a valid config.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clustersense/fusion.hpp"
#include "clustersense/planner.hpp"

namespace clustersense::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string value;
  /// "path:line" for file entries, "--set" for overrides.
  std::string origin;
};

using ConfigEntries = std::map<std::string, ConfigEntry, std::less<>>;

/// Parses config text; `source` names the file in error messages.
ConfigEntries parse_config_text(std::string_view text, std::string_view source);
ConfigEntries read_config_file(const std::string& path);

/// Applies one "key=value" override, replacing any earlier value.
void apply_override(ConfigEntries& entries, std::string_view assignment);

struct RunConfig {
  int sensing_period = 100;
  int sensing_symbols = 5;
  std::optional<double> m_fraction;
  double total_pd_target = 0.9;
  std::vector<double> gamma_db{-5.0, 0.0, 5.0};
  std::vector<FusionRule> rules{FusionRule::And, FusionRule::Or};
  std::optional<int> max_cluster;

  std::uint64_t seed = 1;
  std::uint64_t trials = 1'000'000;
  unsigned workers = 0;

  std::vector<int> mc_sensing_symbols{1, 5, 20};
  std::vector<double> mc_gamma_db{-5.0, 0.0, 5.0};
  std::vector<double> mc_pd_targets{0.9, 0.99};
  std::vector<int> mc_cluster_sizes{1, 2, 4, 8};

  std::vector<int> cal_sensing_periods{50, 100, 200, 500, 1000};
  std::vector<double> cal_pd_targets{0.9, 0.95, 0.99};

  std::string output;

  /// Scenario for one curve of a sweep.
  ScenarioConfig scenario(FusionRule rule, double gamma_db) const;
};

/// Resolves entries against the defaults. `command` is checked against a
/// `command` key if one is present (as in a manifest).
RunConfig resolve_config(const ConfigEntries& entries, std::string_view command);

/// Sensing symbols for a fraction of the period: round to nearest, at least 1.
int symbols_from_fraction(double fraction, int sensing_period);

/// Every resolved key, including metadata, sorted by key.
std::map<std::string, std::string> manifest_entries(const RunConfig& config,
                                                    std::string_view command);
std::string render_manifest(const RunConfig& config, std::string_view command);

struct KeyDoc {
  std::string name;
  std::string default_value;
  std::string description;
};
std::vector<KeyDoc> documented_keys();

/// Shortest decimal text that round-trips to the same double.
std::string format_shortest(double value);

std::string artifact_version();

}  // namespace clustersense::cli
