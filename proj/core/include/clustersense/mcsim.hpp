#pragma once

// Monte Carlo estimates of per-user and fused detection / false-alarm
// probabilities, drawn sample by sample from the received-signal model
//
//   H0: r_k = n_k            H1: r_k = c + n_k,   c = sqrt(2 snr)
//
// with n_k complex Gaussian, unit variance per real dimension. The constant
// real offset carries the same energy (2 m snr) as any other signal shape;
// the detector statistic depends on nothing else.
//
// Every (su, trial) pair reads its own counter-based stream, so estimates are
// bit-identical for a given seed regardless of the worker count.

#include <cstdint>
#include <span>

#include "clustersense/detector.hpp"
#include "clustersense/fusion.hpp"
#include "clustersense/random.hpp"

namespace clustersense {

enum class Hypothesis { H0, H1 };

struct McConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  Hypothesis hypothesis = Hypothesis::H0;
  unsigned workers = 1;
};

struct McEstimate {
  double estimate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t positives = 0;
  double half_width_3sigma = 0.0;
  std::uint64_t seed = 0;
};

/// 3 sqrt(p (1 - p) / trials).
double binomial_half_width_3sigma(double p, std::uint64_t trials);

/// One draw of S = sum_k |r_k|^2.
double simulate_statistic(const SuProfile& profile, Hypothesis hypothesis, CounterRng& rng);

/// Decision S > lambda. Consumes the stream exactly as simulate_statistic
/// does, but stops as soon as the partial energy exceeds lambda.
bool exceeds_threshold(const SuProfile& profile, Hypothesis hypothesis, double lambda,
                       CounterRng& rng);

/// P_d (H1) or P_f (H0) of a single user at threshold lambda.
McEstimate estimate_su_probs(const SuProfile& profile, double lambda, const McConfig& mc);

/// Fused P_d (H1) or P_f (H0) of independently sensing users.
McEstimate estimate_fused_probs(std::span<const SuProfile> profiles,
                                std::span<const double> lambdas, FusionRule rule,
                                const McConfig& mc);

}  // namespace clustersense
