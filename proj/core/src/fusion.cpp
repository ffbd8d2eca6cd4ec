#include "clustersense/fusion.hpp"

#include <cmath>

namespace clustersense {

std::string_view to_string(FusionRule rule) {
  return rule == FusionRule::Or ? "OR" : "AND";
}

std::optional<FusionRule> parse_fusion_rule(std::string_view text) {
  if (text == "OR" || text == "or") return FusionRule::Or;
  if (text == "AND" || text == "and") return FusionRule::And;
  return std::nullopt;
}

double fuse(FusionRule rule, std::span<const double> per_su_probs) {
  if (per_su_probs.empty()) throw DomainError("cannot fuse an empty decision list");
  for (double p : per_su_probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("per-user probability outside [0, 1]");
  }
  if (per_su_probs.size() == 1) return per_su_probs.front();

  if (rule == FusionRule::Or) {
    // 1 - prod(1 - p) through logs keeps small false-alarm rates accurate.
    double log_miss = 0.0;
    for (double p : per_su_probs) log_miss += std::log1p(-p);
    return -std::expm1(log_miss);
  }
  double product = 1.0;
  for (double p : per_su_probs) product *= p;
  return product;
}

FusedProbabilities fuse_cluster(FusionRule rule, std::span<const double> per_su_pd,
                                std::span<const double> per_su_pf) {
  if (per_su_pd.size() != per_su_pf.size()) {
    throw DomainError("detection and false-alarm lists differ in length");
  }
  return {fuse(rule, per_su_pd), fuse(rule, per_su_pf), static_cast<int>(per_su_pd.size())};
}

double per_su_pd_target(FusionRule rule, double total_pd_target, int n) {
  if (n < 1) throw DomainError("cluster size must be at least 1");
  if (!(total_pd_target > 0.0 && total_pd_target <= 1.0)) {
    throw DomainError("total detection target must lie in (0, 1]");
  }
  if (n == 1 || total_pd_target == 1.0) return total_pd_target;
  if (rule == FusionRule::Or) {
    // 1 - (1 - p)^(1/n)
    return -std::expm1(std::log1p(-total_pd_target) / n);
  }
  return std::exp(std::log(total_pd_target) / n);
}

}  // namespace clustersense
