#include "clustersense/detector.hpp"

#include <cmath>

namespace clustersense {

namespace {

void check_threshold(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw DomainError("threshold must be finite and nonnegative");
  }
}

}  // namespace

void SuProfile::check() const {
  if (!std::isfinite(snr) || snr <= 0.0) throw DomainError("SNR must be positive and finite");
  if (sensing_symbols < 1) throw DomainError("sensing_symbols must be at least 1");
}

double noncentrality(const SuProfile& profile) {
  return std::sqrt(2.0 * profile.sensing_symbols * profile.snr);
}

double pd_for_threshold(const SuProfile& profile, double lambda) {
  profile.check();
  check_threshold(lambda);
  return specfun::marcum_q(profile.sensing_symbols, noncentrality(profile), std::sqrt(lambda));
}

double pf_for_threshold(const SuProfile& profile, double lambda) {
  profile.check();
  check_threshold(lambda);
  return specfun::reg_upper_gamma(profile.sensing_symbols, 0.5 * lambda);
}

DetectorOperatingPoint threshold_for_pd(const SuProfile& profile, double target_pd,
                                        const specfun::Tolerance& tol) {
  profile.check();
  if (!(target_pd > 0.0 && target_pd <= 1.0)) {
    throw DomainError("per-user detection target must lie in (0, 1]");
  }
  if (target_pd == 1.0) return {0.0, 1.0, 1.0};

  const double b = specfun::inv_marcum_q_b(profile.sensing_symbols, noncentrality(profile),
                                           target_pd, tol);
  const double lambda = b * b;
  return {lambda, target_pd, pf_for_threshold(profile, lambda)};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace clustersense
