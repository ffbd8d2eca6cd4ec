#pragma once

// Per-user energy detector. The decision statistic is S = sum_k |r_k|^2 over
// m complex samples whose real and imaginary noise parts are independent
// standard normals; under H1 the signal energy sum_k |h s_k|^2 equals
// 2 m snr. Then S ~ chi^2(2m) under H0 and S ~ chi^2(2m, 2 m snr) under H1.

#include "clustersense/specfun.hpp"

namespace clustersense {

/// Link SNR (linear, PU to this user) and sensing length of one secondary user.
struct SuProfile {
  double snr = 1.0;
  int sensing_symbols = 1;

  /// Throws DomainError unless snr > 0 (finite) and sensing_symbols >= 1.
  void check() const;
};

struct DetectorOperatingPoint {
  double threshold = 0.0;
  double p_detect = 1.0;
  double p_false_alarm = 1.0;

  bool operator==(const DetectorOperatingPoint&) const = default;
};

/// Q_m(sqrt(2 m snr), sqrt(lambda)).
double pd_for_threshold(const SuProfile& profile, double lambda);

/// Q(m, lambda / 2); independent of the SNR.
double pf_for_threshold(const SuProfile& profile, double lambda);

/// Threshold meeting `target_pd` exactly. A target of 1 maps to lambda = 0.
DetectorOperatingPoint threshold_for_pd(const SuProfile& profile, double target_pd,
                                        const specfun::Tolerance& tol = {});

/// Noncentrality parameter sqrt(2 m snr) of the H1 statistic.
double noncentrality(const SuProfile& profile);

/// 10^(db / 10).
double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace clustersense
