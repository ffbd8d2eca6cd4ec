// clustersense: throughput-optimal cluster sizing for cooperative energy
// detection.
//
//   clustersense sweep    --config scenario.cfg --output sweep.csv
//   clustersense optimize --set gamma_db=-5,0,5,10
//   clustersense validate --set trials=100000
//   clustersense calibrate
//   clustersense keys

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "clustersense/cli/commands.hpp"
#include "clustersense/cli/config.hpp"
#include "clustersense/errors.hpp"

namespace {

using namespace clustersense;
using namespace clustersense::cli;

struct Invocation {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
};

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(path + ": cannot open for writing");
  out << bytes;
  if (!out.flush()) throw ConfigError(path + ": write failed");
}

int execute(const std::string& command, const Invocation& inv,
            const std::function<CommandResult(const RunConfig&)>& run) {
  ConfigEntries entries;
  if (!inv.config_path.empty()) entries = read_config_file(inv.config_path);
  for (const auto& o : inv.overrides) apply_override(entries, o);
  if (!inv.output.empty()) apply_override(entries, "output=" + inv.output);

  const RunConfig config = resolve_config(entries, command);
  const CommandResult result = run(config);

  if (config.output.empty()) {
    std::cout << result.csv;
    std::cerr << result.summary;
  } else {
    write_file(config.output, result.csv);
    write_file(config.output + ".manifest", render_manifest(config, command));
    std::cout << result.summary << "wrote " << config.output << " and " << config.output
              << ".manifest\n";
  }
  return result.exit_code;
}

void add_run_options(CLI::App* sub, Invocation& inv) {
  sub->add_option("-c,--config", inv.config_path, "key=value config file (a manifest works too)")
      ->check(CLI::ExistingFile);
  sub->add_option("-s,--set", inv.overrides, "override one key, KEY=VALUE (repeatable)");
  sub->add_option("-o,--output", inv.output, "CSV output path; a .manifest sidecar is written");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-size planning for cooperative energy-detection spectrum sensing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", artifact_version());

  struct Command {
    const char* name;
    const char* help;
    std::function<CommandResult(const RunConfig&)> run;
  };
  const std::vector<Command> commands = {
      {"sweep", "throughput and fused false alarm versus cluster size", run_sweep},
      {"optimize", "throughput-maximizing cluster size per rule and SNR", run_optimize},
      {"validate", "Monte Carlo agreement grid for analytic probabilities", run_validate},
      {"calibrate", "search sensing period and detection target for the reported optima",
       run_calibrate},
  };

  Invocation inv;
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_run_options(sub, inv);
    subs.push_back(sub);
  }
  auto* keys = app.add_subcommand("keys", "list config keys with their defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (keys->parsed()) {
      for (const auto& k : documented_keys()) {
        std::cout << k.name << " = " << k.default_value << "\n    " << k.description << '\n';
      }
      return kExitOk;
    }
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (subs[i]->parsed()) return execute(commands[i].name, inv, commands[i].run);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidationFailed;
  }
  return kExitConfigError;
}
