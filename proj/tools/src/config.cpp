#include "clustersense/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "clustersense/detector.hpp"

namespace clustersense::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const ConfigEntry& entry, std::string_view key, const std::string& what) {
  throw ConfigError(entry.origin + ": key '" + std::string(key) + "': " + what);
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) return std::nullopt;
  }
  return value;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> items;
  text = trim(text);
  if (text.empty()) return items;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    items.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

template <class T>
T scalar(const ConfigEntry& e, std::string_view key) {
  const auto v = parse_number<T>(e.value);
  if (!v) fail(e, key, "expected a number, got '" + e.value + "'");
  return *v;
}

template <class T>
std::vector<T> number_list(const ConfigEntry& e, std::string_view key) {
  std::vector<T> out;
  for (auto item : split_list(e.value)) {
    const auto v = parse_number<T>(item);
    if (!v) fail(e, key, "bad list element '" + std::string(item) + "'");
    out.push_back(*v);
  }
  return out;
}

template <class T>
std::string render_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_shortest(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

struct KeySpec {
  const char* name;
  const char* description;
  std::function<void(RunConfig&, const ConfigEntry&)> apply;
  std::function<std::string(const RunConfig&)> render;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {"sensing_period", "symbols per operational period T_s",
       [](RunConfig& c, const ConfigEntry& e) { c.sensing_period = scalar<int>(e, "sensing_period"); },
       [](const RunConfig& c) { return std::to_string(c.sensing_period); }},
      {"sensing_symbols", "symbols spent sensing, m",
       [](RunConfig& c, const ConfigEntry& e) {
         c.sensing_symbols = scalar<int>(e, "sensing_symbols");
       },
       [](const RunConfig& c) { return std::to_string(c.sensing_symbols); }},
      {"m_fraction", "sensing symbols as a fraction of sensing_period (empty = unused)",
       [](RunConfig& c, const ConfigEntry& e) {
         if (trim(e.value).empty()) {
           c.m_fraction.reset();
         } else {
           c.m_fraction = scalar<double>(e, "m_fraction");
         }
       },
       [](const RunConfig& c) { return c.m_fraction ? format_shortest(*c.m_fraction) : ""; }},
      {"total_pd_target", "fused detection probability to hold, 1 - epsilon",
       [](RunConfig& c, const ConfigEntry& e) {
         c.total_pd_target = scalar<double>(e, "total_pd_target");
       },
       [](const RunConfig& c) { return format_shortest(c.total_pd_target); }},
      {"gamma_db", "mean SNR values in dB, one curve each",
       [](RunConfig& c, const ConfigEntry& e) { c.gamma_db = number_list<double>(e, "gamma_db"); },
       [](const RunConfig& c) { return render_list(c.gamma_db); }},
      {"rules", "fusion rules, any of OR, AND",
       [](RunConfig& c, const ConfigEntry& e) {
         c.rules.clear();
         for (auto item : split_list(e.value)) {
           const auto rule = parse_fusion_rule(item);
           if (!rule) fail(e, "rules", "unknown fusion rule '" + std::string(item) + "'");
           c.rules.push_back(*rule);
         }
       },
       [](const RunConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.rules.size(); ++i) {
           if (i) out += ',';
           out += to_string(c.rules[i]);
         }
         return out;
       }},
      {"max_cluster", "largest cluster size swept, or auto (= sensing_period - m)",
       [](RunConfig& c, const ConfigEntry& e) {
         if (trim(e.value) == "auto") {
           c.max_cluster.reset();
         } else {
           c.max_cluster = scalar<int>(e, "max_cluster");
         }
       },
       [](const RunConfig& c) {
         return c.max_cluster ? std::to_string(*c.max_cluster) : std::string("auto");
       }},
      {"seed", "Monte Carlo seed",
       [](RunConfig& c, const ConfigEntry& e) { c.seed = scalar<std::uint64_t>(e, "seed"); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"trials", "Monte Carlo trials per estimate",
       [](RunConfig& c, const ConfigEntry& e) { c.trials = scalar<std::uint64_t>(e, "trials"); },
       [](const RunConfig& c) { return std::to_string(c.trials); }},
      {"workers", "worker threads, 0 = hardware concurrency (does not affect results)",
       [](RunConfig& c, const ConfigEntry& e) { c.workers = scalar<unsigned>(e, "workers"); },
       [](const RunConfig& c) { return std::to_string(c.workers); }},
      {"mc_sensing_symbols", "validation grid: sensing symbols",
       [](RunConfig& c, const ConfigEntry& e) {
         c.mc_sensing_symbols = number_list<int>(e, "mc_sensing_symbols");
       },
       [](const RunConfig& c) { return render_list(c.mc_sensing_symbols); }},
      {"mc_gamma_db", "validation grid: per-user SNR in dB",
       [](RunConfig& c, const ConfigEntry& e) { c.mc_gamma_db = number_list<double>(e, "mc_gamma_db"); },
       [](const RunConfig& c) { return render_list(c.mc_gamma_db); }},
      {"mc_pd_targets", "validation grid: fused detection targets",
       [](RunConfig& c, const ConfigEntry& e) {
         c.mc_pd_targets = number_list<double>(e, "mc_pd_targets");
       },
       [](const RunConfig& c) { return render_list(c.mc_pd_targets); }},
      {"mc_cluster_sizes", "validation grid: cluster sizes",
       [](RunConfig& c, const ConfigEntry& e) {
         c.mc_cluster_sizes = number_list<int>(e, "mc_cluster_sizes");
       },
       [](const RunConfig& c) { return render_list(c.mc_cluster_sizes); }},
      {"cal_sensing_periods", "calibration search: sensing periods",
       [](RunConfig& c, const ConfigEntry& e) {
         c.cal_sensing_periods = number_list<int>(e, "cal_sensing_periods");
       },
       [](const RunConfig& c) { return render_list(c.cal_sensing_periods); }},
      {"cal_pd_targets", "calibration search: fused detection targets",
       [](RunConfig& c, const ConfigEntry& e) {
         c.cal_pd_targets = number_list<double>(e, "cal_pd_targets");
       },
       [](const RunConfig& c) { return render_list(c.cal_pd_targets); }},
      {"output", "CSV output path (empty = stdout)",
       [](RunConfig& c, const ConfigEntry& e) { c.output = std::string(trim(e.value)); },
       [](const RunConfig& c) { return c.output; }},
  };
  return specs;
}

constexpr std::string_view kCommandKey = "command";
constexpr std::string_view kVersionKey = "artifact_version";

std::string origin_of(const ConfigEntries& entries, std::string_view key) {
  const auto it = entries.find(key);
  return it == entries.end() ? std::string("defaults") : it->second.origin;
}

bool probability_in(double p, bool allow_zero, bool allow_one) {
  return (allow_zero ? p >= 0.0 : p > 0.0) && (allow_one ? p <= 1.0 : p < 1.0);
}

void validate(const RunConfig& c, const ConfigEntries& entries) {
  auto bad = [&](std::string_view key, const std::string& what) {
    throw ConfigError(origin_of(entries, key) + ": key '" + std::string(key) + "': " + what);
  };
  if (c.sensing_period < 2) bad("sensing_period", "must be at least 2");
  if (c.m_fraction && !(*c.m_fraction > 0.0 && *c.m_fraction < 1.0)) {
    bad("m_fraction", "must lie in (0, 1)");
  }
  if (c.sensing_symbols < 1) bad("sensing_symbols", "must be at least 1");
  if (c.sensing_symbols >= c.sensing_period) bad("sensing_symbols", "must be below sensing_period");
  if (!probability_in(c.total_pd_target, false, true)) bad("total_pd_target", "must lie in (0, 1]");
  if (c.gamma_db.empty()) bad("gamma_db", "needs at least one value");
  if (c.rules.empty()) bad("rules", "needs at least one rule");
  if (c.max_cluster && (*c.max_cluster < 1 || *c.max_cluster > c.sensing_period - c.sensing_symbols)) {
    bad("max_cluster", "must lie in [1, " + std::to_string(c.sensing_period - c.sensing_symbols) + "]");
  }
  if (c.trials < 1) bad("trials", "must be at least 1");
  for (int m : c.mc_sensing_symbols) {
    if (m < 1) bad("mc_sensing_symbols", "entries must be at least 1");
  }
  for (double p : c.mc_pd_targets) {
    if (!probability_in(p, false, true)) bad("mc_pd_targets", "entries must lie in (0, 1]");
  }
  for (int n : c.mc_cluster_sizes) {
    if (n < 1) bad("mc_cluster_sizes", "entries must be at least 1");
  }
  for (int t : c.cal_sensing_periods) {
    if (t < 4) bad("cal_sensing_periods", "entries must be at least 4");
  }
  for (double p : c.cal_pd_targets) {
    if (!probability_in(p, false, true)) bad("cal_pd_targets", "entries must lie in (0, 1]");
  }
}

}  // namespace

std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string artifact_version() { return "0.3.0"; }

ConfigEntries parse_config_text(std::string_view text, std::string_view source) {
  ConfigEntries entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::string origin = std::string(source) + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(origin + ": missing key before '='");
    if (const auto it = entries.find(key); it != entries.end()) {
      throw ConfigError(origin + ": key '" + key + "' already set at " + it->second.origin);
    }
    entries.emplace(key, ConfigEntry{std::string(trim(line.substr(eq + 1))), origin});
  }
  return entries;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(ConfigEntries& entries, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("--set: expected key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(trim(assignment.substr(0, eq)));
  if (key.empty()) throw ConfigError("--set: missing key in '" + std::string(assignment) + "'");
  entries[key] = ConfigEntry{std::string(trim(assignment.substr(eq + 1))), "--set " + key};
}

int symbols_from_fraction(double fraction, int sensing_period) {
  return std::max(1, static_cast<int>(std::lround(fraction * sensing_period)));
}

RunConfig resolve_config(const ConfigEntries& entries, std::string_view command) {
  RunConfig config;
  const auto& specs = key_specs();
  for (const auto& [key, entry] : entries) {
    if (key == kVersionKey) continue;
    if (key == kCommandKey) {
      if (entry.value != command) {
        throw ConfigError(entry.origin + ": config was written for command '" + entry.value +
                          "', not '" + std::string(command) + "'");
      }
      continue;
    }
    const auto spec = std::find_if(specs.begin(), specs.end(),
                                   [&](const KeySpec& s) { return key == s.name; });
    if (spec == specs.end()) throw ConfigError(entry.origin + ": unknown key '" + key + "'");
    spec->apply(config, entry);
  }

  if (config.m_fraction) {
    if (config.sensing_period < 2) {
      throw ConfigError(origin_of(entries, "sensing_period") +
                        ": key 'sensing_period': must be at least 2");
    }
    const int m = symbols_from_fraction(*config.m_fraction, config.sensing_period);
    if (entries.contains("sensing_symbols") && config.sensing_symbols != m) {
      throw ConfigError(origin_of(entries, "sensing_symbols") + ": key 'sensing_symbols': " +
                        std::to_string(config.sensing_symbols) + " conflicts with m_fraction (" +
                        std::to_string(m) + " symbols)");
    }
    config.sensing_symbols = m;
  }
  validate(config, entries);
  return config;
}

ScenarioConfig RunConfig::scenario(FusionRule rule, double db) const {
  ScenarioConfig s;
  s.sensing_period = sensing_period;
  s.sensing_symbols = sensing_symbols;
  s.total_pd_target = total_pd_target;
  s.mean_snr = db_to_linear(db);
  s.rule = rule;
  s.max_cluster = max_cluster;
  s.workers = workers;
  return s;
}

std::map<std::string, std::string> manifest_entries(const RunConfig& config,
                                                    std::string_view command) {
  std::map<std::string, std::string> out;
  for (const auto& spec : key_specs()) out[spec.name] = spec.render(config);
  out[std::string(kCommandKey)] = std::string(command);
  out[std::string(kVersionKey)] = artifact_version();
  return out;
}

std::string render_manifest(const RunConfig& config, std::string_view command) {
  std::string text;
  for (const auto& [key, value] : manifest_entries(config, command)) {
    text += key;
    text += '=';
    text += value;
    text += '\n';
  }
  return text;
}

std::vector<KeyDoc> documented_keys() {
  const RunConfig defaults;
  std::vector<KeyDoc> docs;
  for (const auto& spec : key_specs()) {
    docs.push_back({spec.name, spec.render(defaults), spec.description});
  }
  return docs;
}

}  // namespace clustersense::cli
