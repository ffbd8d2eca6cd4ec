#include "clustersense/mcsim.hpp"

#include <cmath>
#include <vector>

#include "clustersense/parallel.hpp"

namespace clustersense {
namespace {

double signal_offset(const SuProfile& profile, Hypothesis hypothesis) {
  return hypothesis == Hypothesis::H1 ? std::sqrt(2.0 * profile.snr) : 0.0;
}

void check_threshold(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw DomainError("threshold must be finite and nonnegative");
  }
}

// Counts trials whose decision is positive, splitting [0, trials) into one
// contiguous block per worker. Counts are summed, so the total does not depend
// on the split.
template <class Decide>
McEstimate count_positives(const McConfig& mc, Decide&& decide) {
  if (mc.trials < 1) throw DomainError("Monte Carlo trial count must be at least 1");
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(resolve_workers(mc.workers), mc.trials));
  std::vector<std::uint64_t> counts(workers, 0);
  parallel_for(workers, workers, [&](std::size_t w) {
    const std::uint64_t begin = mc.trials * w / workers;
    const std::uint64_t end = mc.trials * (w + 1) / workers;
    std::uint64_t local = 0;
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      if (decide(trial)) ++local;
    }
    counts[w] = local;
  });

  McEstimate out;
  for (auto c : counts) out.positives += c;
  out.trials = mc.trials;
  out.seed = mc.seed;
  out.estimate = static_cast<double>(out.positives) / static_cast<double>(mc.trials);
  out.half_width_3sigma = binomial_half_width_3sigma(out.estimate, mc.trials);
  return out;
}

}  // namespace

double binomial_half_width_3sigma(double p, std::uint64_t trials) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double simulate_statistic(const SuProfile& profile, Hypothesis hypothesis, CounterRng& rng) {
  const double c = signal_offset(profile, hypothesis);
  double energy = 0.0;
  for (int k = 0; k < profile.sensing_symbols; ++k) {
    const double re = c + rng.normal();
    const double im = rng.normal();
    energy += re * re + im * im;
  }
  return energy;
}

bool exceeds_threshold(const SuProfile& profile, Hypothesis hypothesis, double lambda,
                       CounterRng& rng) {
  const double c = signal_offset(profile, hypothesis);
  double energy = 0.0;
  for (int k = 0; k < profile.sensing_symbols; ++k) {
    const double re = c + rng.normal();
    const double im = rng.normal();
    energy += re * re + im * im;
    if (energy > lambda) return true;
  }
  return false;
}

McEstimate estimate_su_probs(const SuProfile& profile, double lambda, const McConfig& mc) {
  profile.check();
  check_threshold(lambda);
  return count_positives(mc, [&](std::uint64_t trial) {
    CounterRng rng(mc.seed, 0, trial);
    return exceeds_threshold(profile, mc.hypothesis, lambda, rng);
  });
}

McEstimate estimate_fused_probs(std::span<const SuProfile> profiles,
                                std::span<const double> lambdas, FusionRule rule,
                                const McConfig& mc) {
  if (profiles.empty()) throw DomainError("cluster must have at least one member");
  if (profiles.size() != lambdas.size()) {
    throw DomainError("profiles and thresholds differ in length");
  }
  for (const auto& p : profiles) p.check();
  for (double l : lambdas) check_threshold(l);

  // Members draw from independent streams, so evaluation can stop at the
  // first decisive member without changing any other member's draws.
  return count_positives(mc, [&](std::uint64_t trial) {
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      CounterRng rng(mc.seed, i, trial);
      const bool hit = exceeds_threshold(profiles[i], mc.hypothesis, lambdas[i], rng);
      if (rule == FusionRule::Or && hit) return true;
      if (rule == FusionRule::And && !hit) return false;
    }
    return rule == FusionRule::And;
  });
}

}  // namespace clustersense
