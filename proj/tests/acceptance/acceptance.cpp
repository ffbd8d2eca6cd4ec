// Acceptance run: one [PASS]/[FAIL] line per criterion. Pass criterion
// numbers as arguments to run a subset; exit status is 0 only if every
// selected criterion passed.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "clustersense/cli/commands.hpp"
#include "clustersense/cli/config.hpp"
#include "clustersense/detector.hpp"
#include "clustersense/planner.hpp"
#include "clustersense/specfun.hpp"
#include "oracles.hpp"

namespace cs = clustersense;
namespace sf = clustersense::specfun;
namespace cli = clustersense::cli;
namespace oracle = clustersense::oracle;

namespace {

// Pinned tolerances.
constexpr double kOracleRelTol = 1e-10;
constexpr double kRoundTripTol = 1e-8;
constexpr std::uint64_t kMcTrials = 1'000'000;
constexpr std::uint64_t kDeterminismTrials = 20'000;

// Planner grid for the paper's ordinal claims.
constexpr int kPeriod = 100;
constexpr double kTarget = 0.9;
const std::vector<int> kSymbols = {5, 20};
const std::vector<double> kGammaDb = {-5.0, 0.0, 5.0, 10.0};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome oracle_equivalence() {
  double worst_q = 0.0, worst_p = 0.0, worst_inv_q = 0.0, worst_inv_p = 0.0;
  std::size_t n = 0;
  for (int m : {1, 2, 4, 8, 16, 32}) {
    for (double a : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      for (double b : {0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0}) {
        worst_q = std::max(worst_q, oracle::rel_err(sf::marcum_q(m, a, b),
                                                    oracle::poisson_mixture_marcum_q(m, a, b)));
        ++n;
      }
      for (int k = 1; k <= 99; ++k) {
        const double p = k / 100.0;
        const double b = sf::inv_marcum_q_b(m, a, p);
        worst_inv_q = std::max(worst_inv_q, std::abs(sf::marcum_q(m, a, b) - p));
      }
    }
  }
  for (double a : {0.5, 1.0, 2.5, 5.0, 10.0, 32.0}) {
    for (double x : {0.1, 0.7, 2.0, 4.7, 9.0, 20.0, 40.0}) {
      worst_p = std::max(worst_p, oracle::rel_err(sf::reg_lower_gamma(a, x),
                                                  oracle::quad_reg_lower_gamma(a, x)));
      ++n;
    }
    for (int k = 0; k <= 98; ++k) {
      const double p = k / 100.0;
      const double x = sf::inv_reg_lower_gamma(a, p);
      worst_inv_p = std::max(worst_inv_p, std::abs(sf::reg_lower_gamma(a, x) - p));
    }
  }
  // The two worked round trips.
  const double b = sf::inv_marcum_q_b(4, 1.5, sf::marcum_q(4, 1.5, 2.5));
  const double x = sf::inv_reg_lower_gamma(5.0, sf::reg_lower_gamma(5.0, 4.7));
  const double worst_arg = std::max(std::abs(b - 2.5), std::abs(x - 4.7));

  Outcome out;
  out.pass = worst_q <= kOracleRelTol && worst_p <= kOracleRelTol &&
             worst_inv_q <= kRoundTripTol && worst_inv_p <= kRoundTripTol &&
             worst_arg <= kRoundTripTol;
  out.detail = std::to_string(n) + " forward points, max rel err Q " + fmt(worst_q) + ", P " +
               fmt(worst_p) + " (tol " + fmt(kOracleRelTol) + "); round trip max abs err Q " +
               fmt(worst_inv_q) + ", P " + fmt(worst_inv_p) + ", argument " + fmt(worst_arg) +
               " (tol " + fmt(kRoundTripTol) + ")";
  return out;
}

Outcome monte_carlo_agreement() {
  cli::RunConfig c;
  c.trials = kMcTrials;
  c.seed = 1;
  c.workers = 0;
  const auto report = cli::run_validation_grid(c);
  Outcome out;
  out.pass = report.passed && report.rows.size() == 576;
  out.detail = std::to_string(report.rows.size()) + " checks at " + std::to_string(c.trials) +
               " trials; " + std::to_string(report.first_pass_failures) +
               " outside 3 sigma on first pass, " + std::to_string(report.final_failures) +
               " after re-run (allowed " + std::to_string(cli::kMaxMarginalFailures) + ")";
  return out;
}

struct Optimum {
  int n_opt = 0;
  double throughput = 0.0;
  std::vector<double> curve;
};

using OptimumKey = std::tuple<int, double, cs::FusionRule>;

const std::map<OptimumKey, Optimum>& paper_grid() {
  static const auto grid = [] {
    std::map<OptimumKey, Optimum> g;
    for (int m : kSymbols) {
      for (double db : kGammaDb) {
        for (auto rule : {cs::FusionRule::Or, cs::FusionRule::And}) {
          cs::ScenarioConfig s;
          s.sensing_period = kPeriod;
          s.sensing_symbols = m;
          s.total_pd_target = kTarget;
          s.mean_snr = cs::db_to_linear(db);
          s.rule = rule;
          s.workers = 0;
          const auto table = cs::optimize_cluster_size(s);
          Optimum o;
          o.n_opt = table.optimal_row().cluster_size;
          o.throughput = table.optimal_row().throughput;
          for (const auto& r : table.rows) o.curve.push_back(r.throughput);
          g[{m, db, rule}] = std::move(o);
        }
      }
    }
    return g;
  }();
  return grid;
}

std::string point(int m, double db) { return "m=" + std::to_string(m) + " " + fmt(db) + " dB"; }

Outcome rule_ordering() {
  Outcome out;
  std::string violations;
  for (int m : kSymbols) {
    for (double db : kGammaDb) {
      const int n_or = paper_grid().at({m, db, cs::FusionRule::Or}).n_opt;
      const int n_and = paper_grid().at({m, db, cs::FusionRule::And}).n_opt;
      const bool ok = (n_or > 1 && n_and > 1) ? n_or < n_and : n_or <= n_and;
      if (!ok) {
        out.pass = false;
        violations += " " + point(m, db) + " (OR " + std::to_string(n_or) + ", AND " +
                      std::to_string(n_and) + ");";
      }
    }
  }
  out.detail = out.pass ? "N_opt(OR) <= N_opt(AND) at all 8 points, strict where both > 1"
                        : "violated at" + violations;
  return out;
}

Outcome or_dominance() {
  Outcome out;
  std::string violations;
  for (int m : kSymbols) {
    for (double db : kGammaDb) {
      const double t_or = paper_grid().at({m, db, cs::FusionRule::Or}).throughput;
      const double t_and = paper_grid().at({m, db, cs::FusionRule::And}).throughput;
      if (!(t_or >= t_and)) {
        out.pass = false;
        violations += " " + point(m, db) + " (OR " + fmt(t_or) + ", AND " + fmt(t_and) + ");";
      }
    }
  }
  out.detail = out.pass ? "max throughput OR >= AND at all 8 points" : "violated at" + violations;
  return out;
}

Outcome snr_monotonicity() {
  Outcome out;
  std::string seen;
  for (auto rule : {cs::FusionRule::Or, cs::FusionRule::And}) {
    for (int m : kSymbols) {
      std::string row = " " + std::string(cs::to_string(rule)) + " m=" + std::to_string(m) + ":";
      bool ok = true;
      int prev = 0;
      for (double db : kGammaDb) {
        const int n = paper_grid().at({m, db, rule}).n_opt;
        if (prev != 0 && n > prev) ok = false;
        prev = n;
        row += " " + std::to_string(n);
      }
      if (!ok) {
        out.pass = false;
        row += " (increases)";
      }
      seen += row + ";";
    }
  }
  out.detail = "N_opt over -5,0,5,10 dB;" + seen;
  return out;
}

Outcome distributed_regime() {
  constexpr int m = 20;  // 0.2 T_s
  Outcome out;
  out.pass = false;
  std::string found;
  for (double db : kGammaDb) {
    bool all = true;
    for (auto rule : {cs::FusionRule::Or, cs::FusionRule::And}) {
      const auto& o = paper_grid().at({m, db, rule});
      const bool decreasing =
          std::adjacent_find(o.curve.begin(), o.curve.end(), std::less_equal<>()) ==
          o.curve.end();
      all = all && decreasing && o.n_opt == 1;
    }
    if (all) {
      out.pass = true;
      found += (found.empty() ? "" : ", ") + fmt(db) + " dB";
    }
  }
  out.detail = out.pass ? "m=20: throughput strictly decreasing in N, N_opt=1 for both rules at " +
                              found
                        : "m=20: no tested SNR has both curves strictly decreasing";
  return out;
}

Outcome boundaries() {
  Outcome out;
  std::size_t unit_rows = 0, full_rows = 0;
  for (int m : {1, 5, 20}) {
    for (double db : {-5.0, 0.0, 5.0, 10.0}) {
      for (auto rule : {cs::FusionRule::Or, cs::FusionRule::And}) {
        cs::ScenarioConfig s;
        s.sensing_period = kPeriod;
        s.sensing_symbols = m;
        s.total_pd_target = 1.0;
        s.mean_snr = cs::db_to_linear(db);
        s.rule = rule;
        for (const auto& r : cs::optimize_cluster_size(s).rows) {
          ++unit_rows;
          if (r.throughput != 0.0 || r.fused_pf != 1.0) out.pass = false;
        }
        s.total_pd_target = kTarget;
        const auto r = cs::evaluate_cluster(s, kPeriod - m);
        ++full_rows;
        if (r.throughput != 0.0 || r.overhead_factor != 0.0) out.pass = false;
      }
    }
  }
  out.detail = std::to_string(unit_rows) + " rows with target 1 and " +
               std::to_string(full_rows) + " rows with m + N = T_s checked for throughput == 0";
  return out;
}

cli::RunConfig from_manifest(const std::string& manifest, std::string_view command) {
  return cli::resolve_config(cli::parse_config_text(manifest, "manifest"), command);
}

Outcome determinism() {
  Outcome out;
  std::string detail;

  cli::RunConfig sweep = cli::resolve_config(
      cli::parse_config_text("gamma_db=-5,0,5,10\nsensing_symbols=20\n", "acceptance"), "sweep");
  sweep.workers = 4;
  const std::string sweep_manifest = cli::render_manifest(sweep, "sweep");
  const std::string s1 = cli::run_sweep(from_manifest(sweep_manifest, "sweep")).csv;
  const std::string s2 = cli::run_sweep(from_manifest(sweep_manifest, "sweep")).csv;
  cli::RunConfig serial = from_manifest(sweep_manifest, "sweep");
  serial.workers = 1;
  const std::string s3 = cli::run_sweep(serial).csv;
  if (s1 != s2 || s1 != s3) out.pass = false;

  cli::RunConfig validate;
  validate.trials = kDeterminismTrials;
  validate.seed = 12345;
  validate.workers = 4;
  const std::string validate_manifest = cli::render_manifest(validate, "validate");
  const std::string v1 = cli::run_validate(from_manifest(validate_manifest, "validate")).csv;
  const std::string v2 = cli::run_validate(from_manifest(validate_manifest, "validate")).csv;
  cli::RunConfig vserial = from_manifest(validate_manifest, "validate");
  vserial.workers = 1;
  const std::string v3 = cli::run_validate(vserial).csv;
  if (v1 != v2 || v1 != v3) out.pass = false;

  out.detail = "sweep (" + std::to_string(s1.size()) + " bytes) and validate (" +
               std::to_string(v1.size()) + " bytes, " + std::to_string(kDeterminismTrials) +
               " trials) identical across two manifest runs with 4 workers and a 1-worker run";
  if (!out.pass) out.detail = "outputs differ: " + out.detail;
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "special-function oracle equivalence", oracle_equivalence},
      {2, "Monte Carlo agreement", monte_carlo_agreement},
      {3, "rule ordering of the optimum", rule_ordering},
      {4, "optimized OR dominance", or_dominance},
      {5, "SNR monotonicity of the optimum", snr_monotonicity},
      {6, "high-SNR distributed regime", distributed_regime},
      {7, "boundary behavior", boundaries},
      {8, "determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
