#pragma once

// Hard-decision fusion of independent per-user decisions.

#include <span>
#include <string_view>
#include <optional>

#include "clustersense/errors.hpp"

namespace clustersense {

enum class FusionRule { Or, And };

std::string_view to_string(FusionRule rule);
std::optional<FusionRule> parse_fusion_rule(std::string_view text);

struct FusedProbabilities {
  double p_detect_total = 0.0;
  double p_false_alarm_total = 0.0;
  int cluster_size = 1;
};

/// OR: 1 - prod(1 - p_n). AND: prod(p_n).
double fuse(FusionRule rule, std::span<const double> per_su_probs);

/// Fuses detection and false-alarm lists of equal length.
FusedProbabilities fuse_cluster(FusionRule rule, std::span<const double> per_su_pd,
                                std::span<const double> per_su_pf);

/// Equal per-user detection probability whose n-fold fusion gives
/// `total_pd_target`.
double per_su_pd_target(FusionRule rule, double total_pd_target, int n);

}  // namespace clustersense
