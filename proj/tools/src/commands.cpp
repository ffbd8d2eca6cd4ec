#include "clustersense/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "clustersense/detector.hpp"
#include "clustersense/parallel.hpp"
#include "clustersense/planner.hpp"
#include "clustersense/random.hpp"

namespace clustersense::cli {
namespace {

std::vector<FusionRule> sorted_rules(std::vector<FusionRule> rules) {
  // Lexicographic by name: AND before OR.
  std::sort(rules.begin(), rules.end(),
            [](FusionRule a, FusionRule b) { return to_string(a) < to_string(b); });
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  return rules;
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct Curve {
  FusionRule rule;
  double gamma_db;
  SweepTable table;
};

std::vector<Curve> sweep_curves(const RunConfig& config) {
  std::vector<Curve> curves;
  for (auto rule : sorted_rules(config.rules)) {
    for (double db : sorted_unique(config.gamma_db)) {
      curves.push_back({rule, db, optimize_cluster_size(config.scenario(rule, db))});
    }
  }
  return curves;
}

std::string summary_header(const RunConfig& c) {
  std::ostringstream os;
  os << "T_s=" << c.sensing_period << " m=" << c.sensing_symbols
     << " total_pd_target=" << format_shortest(c.total_pd_target) << '\n';
  return os.str();
}

std::uint64_t row_seed(std::uint64_t base, std::size_t row, std::uint64_t attempt) {
  return mix64(mix64(base) + row * 0x9e3779b97f4a7c15ULL + attempt * 0xd1b54a32d192ed03ULL);
}

}  // namespace

std::string format_prob(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

CommandResult run_sweep(const RunConfig& config) {
  CommandResult out;
  std::string csv =
      "rule,gamma_db,n,per_su_pd,lambda,per_su_pf,pf_total,overhead_factor,throughput,optimal\n";
  std::string summary = summary_header(config);
  for (const auto& curve : sweep_curves(config)) {
    const std::string rule(to_string(curve.rule));
    const std::string db = format_prob(curve.gamma_db);
    for (std::size_t k = 0; k < curve.table.rows.size(); ++k) {
      const auto& r = curve.table.rows[k];
      csv += rule + ',' + db + ',' + std::to_string(r.cluster_size) + ',' + format_prob(r.per_su_pd) +
             ',' + format_prob(r.threshold) + ',' + format_prob(r.per_su_pf) + ',' +
             format_prob(r.fused_pf) + ',' + format_prob(r.overhead_factor) + ',' +
             format_prob(r.throughput) + ',' + (k == curve.table.optimal ? "1" : "0") + '\n';
    }
    const auto& best = curve.table.optimal_row();
    summary += rule + " gamma_db=" + db + ": N_opt=" + std::to_string(best.cluster_size) +
               " throughput=" + format_prob(best.throughput) + '\n';
  }
  out.csv = std::move(csv);
  out.summary = std::move(summary);
  return out;
}

CommandResult run_optimize(const RunConfig& config) {
  CommandResult out;
  out.csv = "rule,gamma_db,n_opt,throughput,pf_total\n";
  std::ostringstream summary;
  summary << summary_header(config);
  char line[160];
  std::snprintf(line, sizeof line, "%-5s %10s %6s %16s %16s\n", "rule", "gamma_db", "N_opt",
                "throughput", "pf_total");
  summary << line;
  for (const auto& curve : sweep_curves(config)) {
    const auto& best = curve.table.optimal_row();
    const std::string rule(to_string(curve.rule));
    out.csv += rule + ',' + format_prob(curve.gamma_db) + ',' + std::to_string(best.cluster_size) +
               ',' + format_prob(best.throughput) + ',' + format_prob(best.fused_pf) + '\n';
    std::snprintf(line, sizeof line, "%-5s %10s %6d %16s %16s\n", rule.c_str(),
                  format_prob(curve.gamma_db).c_str(), best.cluster_size,
                  format_prob(best.throughput).c_str(), format_prob(best.fused_pf).c_str());
    summary << line;
  }
  out.summary = summary.str();
  return out;
}

bool agrees(const McEstimate& estimate, double analytic) {
  double hw = std::max(estimate.half_width_3sigma,
                       binomial_half_width_3sigma(analytic, estimate.trials));
  if (estimate.positives == 0 || estimate.positives == estimate.trials) {
    // No events (or no non-events): rule of three.
    hw = std::max(hw, 3.0 / static_cast<double>(estimate.trials));
  }
  return std::abs(estimate.estimate - analytic) <= hw;
}

ValidationReport run_validation_grid(const RunConfig& config) {
  ValidationReport report;
  for (int m : config.mc_sensing_symbols) {
    for (double db : config.mc_gamma_db) {
      for (double target : config.mc_pd_targets) {
        for (auto rule : sorted_rules(config.rules)) {
          for (int n : config.mc_cluster_sizes) {
            ValidationRow base;
            base.sensing_symbols = m;
            base.gamma_db = db;
            base.pd_target = target;
            base.rule = rule;
            base.cluster_size = n;
            for (const char* scope : {"per_su", "fused"}) {
              for (const char* quantity : {"pd", "pf"}) {
                ValidationRow row = base;
                row.scope = scope;
                row.quantity = quantity;
                report.rows.push_back(row);
              }
            }
          }
        }
      }
    }
  }

  auto estimate = [&](const ValidationRow& row, std::uint64_t seed) {
    const SuProfile profile{db_to_linear(row.gamma_db), row.sensing_symbols};
    McConfig mc;
    mc.trials = config.trials;
    mc.seed = seed;
    mc.hypothesis = row.quantity == std::string("pd") ? Hypothesis::H1 : Hypothesis::H0;
    mc.workers = 1;
    if (row.scope == "per_su") return estimate_su_probs(profile, row.threshold, mc);
    const std::vector<SuProfile> profiles(row.cluster_size, profile);
    const std::vector<double> lambdas(row.cluster_size, row.threshold);
    return estimate_fused_probs(profiles, lambdas, row.rule, mc);
  };

  parallel_for(report.rows.size(), config.workers, [&](std::size_t i) {
    auto& row = report.rows[i];
    const SuProfile profile{db_to_linear(row.gamma_db), row.sensing_symbols};
    const double per_su_pd = per_su_pd_target(row.rule, row.pd_target, row.cluster_size);
    const auto op = threshold_for_pd(profile, per_su_pd);
    row.threshold = op.threshold;
    const double per_su = row.quantity == "pd" ? pd_for_threshold(profile, op.threshold)
                                               : op.p_false_alarm;
    if (row.scope == "per_su") {
      row.analytic = per_su;
    } else {
      const std::vector<double> copies(row.cluster_size, per_su);
      row.analytic = fuse(row.rule, copies);
    }
    row.first = estimate(row, row_seed(config.seed, i, 0));
    row.first_pass = agrees(row.first, row.analytic);
    if (!row.first_pass) {
      row.rerun = true;
      row.second = estimate(row, row_seed(config.seed, i, 1));
      row.second_pass = agrees(row.second, row.analytic);
    }
  });

  for (const auto& row : report.rows) {
    if (!row.first_pass) ++report.first_pass_failures;
    if (!row.passed()) ++report.final_failures;
  }
  report.passed = report.final_failures <= kMaxMarginalFailures;
  return report;
}

std::string validation_csv(const ValidationReport& report) {
  std::string csv =
      "scope,quantity,rule,m,gamma_db,pd_target,n,lambda,analytic,trials,seed,estimate,half_width,"
      "pass,rerun_seed,rerun_estimate,rerun_half_width,rerun_pass\n";
  for (const auto& r : report.rows) {
    csv += r.scope + ',' + r.quantity + ',' + std::string(to_string(r.rule)) + ',' +
           std::to_string(r.sensing_symbols) + ',' + format_prob(r.gamma_db) + ',' +
           format_prob(r.pd_target) + ',' + std::to_string(r.cluster_size) + ',' +
           format_prob(r.threshold) + ',' + format_prob(r.analytic) + ',' +
           std::to_string(r.first.trials) + ',' + std::to_string(r.first.seed) + ',' +
           format_prob(r.first.estimate) + ',' + format_prob(r.first.half_width_3sigma) + ',' +
           (r.first_pass ? "1" : "0") + ',';
    if (r.rerun) {
      csv += std::to_string(r.second.seed) + ',' + format_prob(r.second.estimate) + ',' +
             format_prob(r.second.half_width_3sigma) + ',' + (r.second_pass ? "1" : "0");
    } else {
      csv += ",,,";
    }
    csv += '\n';
  }
  return csv;
}

CommandResult run_validate(const RunConfig& config) {
  const auto report = run_validation_grid(config);
  CommandResult out;
  out.csv = validation_csv(report);
  std::ostringstream summary;
  summary << "Monte Carlo agreement: " << report.rows.size() << " checks at " << config.trials
          << " trials, seed " << config.seed << '\n'
          << "  outside 3-sigma on first run: " << report.first_pass_failures << '\n'
          << "  still outside after re-run:   " << report.final_failures << " (allowed "
          << kMaxMarginalFailures << ")\n";
  for (const auto& r : report.rows) {
    if (r.first_pass) continue;
    summary << "  " << (r.passed() ? "recovered" : "FAILED") << ": " << r.scope << ' '
            << r.quantity << ' ' << to_string(r.rule) << " m=" << r.sensing_symbols
            << " gamma_db=" << format_prob(r.gamma_db) << " target=" << format_prob(r.pd_target)
            << " n=" << r.cluster_size << " analytic=" << format_prob(r.analytic)
            << " estimate=" << format_prob(r.first.estimate) << '\n';
  }
  summary << (report.passed ? "PASS" : "FAIL") << '\n';
  out.summary = summary.str();
  out.exit_code = report.passed ? kExitOk : kExitValidationFailed;
  return out;
}

namespace {

struct CalibrationTarget {
  const char* label;
  double m_fraction;
  double gamma_db;
  int n_opt_or;
  int n_opt_and;
};

// Optima read off the published throughput curves.
constexpr CalibrationTarget kCalibrationTargets[] = {
    {"fig2", 0.05, 5.0, 2, 4},
    {"fig4", 0.2, 0.0, 4, 8},
};

}  // namespace

CommandResult run_calibrate(const RunConfig& config) {
  CommandResult out;
  out.csv = "sensing_period,pd_target";
  for (const auto& t : kCalibrationTargets) {
    const std::string l = t.label;
    out.csv += ',' + l + "_m," + l + "_nopt_or," + l + "_nopt_and";
  }
  out.csv += ",distance,match,is_default\n";

  const auto periods = sorted_unique(config.cal_sensing_periods);
  const auto targets = sorted_unique(config.cal_pd_targets);
  std::ostringstream summary;
  if (periods.empty() || targets.empty()) {
    summary << "empty search range\n";
    out.summary = summary.str();
    return out;
  }

  struct Hit {
    int period;
    double target;
    int distance;
  };
  std::vector<Hit> matches;
  std::optional<Hit> closest;

  for (int period : periods) {
    for (double target : targets) {
      std::string row = std::to_string(period) + ',' + format_prob(target);
      int distance = 0;
      for (const auto& t : kCalibrationTargets) {
        RunConfig c = config;
        c.sensing_period = period;
        c.sensing_symbols = symbols_from_fraction(t.m_fraction, period);
        c.total_pd_target = target;
        c.max_cluster.reset();
        const int n_or =
            optimize_cluster_size(c.scenario(FusionRule::Or, t.gamma_db)).optimal_row().cluster_size;
        const int n_and =
            optimize_cluster_size(c.scenario(FusionRule::And, t.gamma_db)).optimal_row().cluster_size;
        distance += std::abs(n_or - t.n_opt_or) + std::abs(n_and - t.n_opt_and);
        row += ',' + std::to_string(c.sensing_symbols) + ',' + std::to_string(n_or) + ',' +
               std::to_string(n_and);
      }
      const bool is_default =
          period == config.sensing_period && target == config.total_pd_target;
      row += ',' + std::to_string(distance) + ',' + (distance == 0 ? "1" : "0") + ',' +
             (is_default ? "1" : "0") + '\n';
      out.csv += row;
      const Hit hit{period, target, distance};
      if (distance == 0) matches.push_back(hit);
      if (!closest || distance < closest->distance) closest = hit;
    }
  }

  summary << "searched " << periods.size() * targets.size()
          << " (sensing_period, pd_target) settings against reported optima"
          << " fig2 (5 dB, m=0.05 T_s): OR 2 / AND 4, fig4 (0 dB, m=0.2 T_s): OR 4 / AND 8\n";
  if (matches.empty()) {
    summary << "no match found; closest: sensing_period=" << closest->period
            << " pd_target=" << format_prob(closest->target) << " (distance "
            << closest->distance << ")\n";
  } else {
    for (const auto& m : matches) {
      summary << "match: sensing_period=" << m.period << " pd_target=" << format_prob(m.target)
              << '\n';
    }
  }
  out.summary = summary.str();
  return out;
}

}  // namespace clustersense::cli
