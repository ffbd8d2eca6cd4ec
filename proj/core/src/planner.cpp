#include "clustersense/planner.hpp"

#include <cmath>
#include <string>

#include "clustersense/parallel.hpp"

namespace clustersense {

int ScenarioConfig::resolved_max_cluster() const {
  return max_cluster.value_or(sensing_period - sensing_symbols);
}

void ScenarioConfig::check() const {
  if (sensing_symbols < 1) throw DomainError("sensing_symbols must be at least 1");
  if (sensing_period <= sensing_symbols) {
    throw DomainError("sensing_period must exceed sensing_symbols");
  }
  if (!(total_pd_target > 0.0 && total_pd_target <= 1.0)) {
    throw DomainError("total_pd_target must lie in (0, 1]");
  }
  if (!std::isfinite(mean_snr) || mean_snr <= 0.0) {
    throw DomainError("mean SNR must be positive and finite");
  }
  const int n_max = resolved_max_cluster();
  if (n_max < 1 || n_max > sensing_period - sensing_symbols) {
    throw DomainError("max_cluster must lie in [1, sensing_period - sensing_symbols] = [1, " +
                      std::to_string(sensing_period - sensing_symbols) + "]");
  }
  tolerance.check();
}

double overhead_factor(int sensing_period, int sensing_symbols, int n) {
  return static_cast<double>(sensing_period - sensing_symbols - n) / sensing_period;
}

namespace {

ClusterEvaluation evaluate_members(const ScenarioConfig& config, std::span<const double> snrs) {
  config.check();
  const int n = static_cast<int>(snrs.size());
  if (n < 1) throw DomainError("cluster must have at least one member");
  if (config.sensing_symbols + n > config.sensing_period) {
    throw DomainError("sensing_symbols + cluster size exceeds sensing_period");
  }

  ClusterEvaluation out;
  out.cluster_size = n;
  out.per_su_pd = per_su_pd_target(config.rule, config.total_pd_target, n);
  out.members.reserve(snrs.size());

  std::vector<double> pd(snrs.size());
  std::vector<double> pf(snrs.size());
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    // Members with equal SNR share one solve; results are identical either way.
    if (i > 0 && snrs[i] == snrs[i - 1]) {
      out.members.push_back(out.members.back());
    } else {
      const SuProfile profile{snrs[i], config.sensing_symbols};
      out.members.push_back(threshold_for_pd(profile, out.per_su_pd, config.tolerance));
    }
    pd[i] = out.members.back().p_detect;
    pf[i] = out.members.back().p_false_alarm;
  }

  out.threshold = out.members.front().threshold;
  out.per_su_pf = out.members.front().p_false_alarm;
  const FusedProbabilities fused = fuse_cluster(config.rule, pd, pf);
  out.fused_pd = fused.p_detect_total;
  out.fused_pf = fused.p_false_alarm_total;
  out.overhead_factor = overhead_factor(config.sensing_period, config.sensing_symbols, n);
  out.throughput = out.overhead_factor * (1.0 - out.fused_pf);
  return out;
}

}  // namespace

ClusterEvaluation evaluate_cluster(const ScenarioConfig& config, int n) {
  if (n < 1) throw DomainError("cluster size must be at least 1");
  if (n > config.resolved_max_cluster()) throw DomainError("cluster size exceeds max_cluster");
  const std::vector<double> snrs(static_cast<std::size_t>(n), config.mean_snr);
  return evaluate_members(config, snrs);
}

ClusterEvaluation evaluate_cluster_heterogeneous(const ScenarioConfig& config,
                                                 std::span<const double> snrs) {
  for (double g : snrs) {
    if (!std::isfinite(g) || g <= 0.0) throw DomainError("member SNR must be positive and finite");
  }
  return evaluate_members(config, snrs);
}

std::size_t argmax_throughput(std::span<const ClusterEvaluation> rows) {
  if (rows.empty()) throw DomainError("empty sweep");
  std::size_t best = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].throughput > rows[best].throughput + kThroughputTieEps) best = k;
  }
  return best;
}

SweepTable optimize_cluster_size(const ScenarioConfig& config) {
  config.check();
  const int n_max = config.resolved_max_cluster();
  SweepTable table;
  table.rows.resize(static_cast<std::size_t>(n_max));
  parallel_for(table.rows.size(), config.workers, [&](std::size_t i) {
    table.rows[i] = evaluate_cluster(config, static_cast<int>(i) + 1);
  });
  table.optimal = argmax_throughput(table.rows);
  return table;
}

}  // namespace clustersense
