#pragma once

// Normalized throughput of a cooperating cluster and the cluster size that
// maximizes it:
//
//   R(N) = (1 - (m + N) / T_s) * (1 - P_f^tot(N))
//
// where m symbols are spent sensing, N symbols exchanging one-symbol hard
// decisions, and P_f^tot is the fused false-alarm probability when the fused
// detection probability is held at the target.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "clustersense/detector.hpp"
#include "clustersense/fusion.hpp"

namespace clustersense {

struct ScenarioConfig {
  int sensing_period = 100;
  int sensing_symbols = 5;
  double total_pd_target = 0.9;
  double mean_snr = 1.0;
  FusionRule rule = FusionRule::Or;
  /// Largest cluster size swept; unset means sensing_period - sensing_symbols.
  std::optional<int> max_cluster;
  specfun::Tolerance tolerance{};
  /// Sweep workers; 0 uses the hardware concurrency.
  unsigned workers = 1;

  int resolved_max_cluster() const;
  /// Throws DomainError when any invariant is violated.
  void check() const;
};

struct ClusterEvaluation {
  int cluster_size = 1;
  double per_su_pd = 0.0;
  double threshold = 0.0;
  double per_su_pf = 0.0;
  double fused_pd = 0.0;
  double fused_pf = 0.0;
  double overhead_factor = 0.0;
  double throughput = 0.0;
  /// One operating point per member. For heterogeneous clusters the scalar
  /// threshold and per_su_pf fields describe the first member.
  std::vector<DetectorOperatingPoint> members;

  bool operator==(const ClusterEvaluation&) const = default;
};

struct SweepTable {
  std::vector<ClusterEvaluation> rows;
  std::size_t optimal = 0;

  const ClusterEvaluation& optimal_row() const { return rows.at(optimal); }
};

/// Throughputs within this distance are treated as tied; ties go to smaller N.
inline constexpr double kThroughputTieEps = 1e-12;

/// 1 - (m + n) / T_s, exactly zero when m + n = T_s.
double overhead_factor(int sensing_period, int sensing_symbols, int n);

ClusterEvaluation evaluate_cluster(const ScenarioConfig& config, int n);

/// Same pipeline with one SNR per member; the per-user detection target is
/// shared and each member solves its own threshold.
ClusterEvaluation evaluate_cluster_heterogeneous(const ScenarioConfig& config,
                                                 std::span<const double> snrs);

/// Exhaustive sweep over N = 1..max_cluster.
SweepTable optimize_cluster_size(const ScenarioConfig& config);

/// Index of the best row, ties toward the lower index.
std::size_t argmax_throughput(std::span<const ClusterEvaluation> rows);

}  // namespace clustersense
