#pragma once

// Special functions behind the energy-detection model: regularized incomplete
// gamma functions, the generalized Marcum Q function of integer order, and
// their monotone inverses.
//
// All functions are pure and reentrant.

#include "clustersense/errors.hpp"

namespace clustersense::specfun {

/// Stopping rule for the root finders.
struct Tolerance {
  double rel_eps = 1e-10;
  int max_iter = 200;

  /// Throws DomainError unless 0 < rel_eps < 1 and max_iter >= 1.
  void check() const;
};

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double reg_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), evaluated
/// directly so that small tails keep their relative accuracy.
double reg_upper_gamma(double a, double x);

/// Generalized Marcum Q function Q_m(a, b) = Pr[X > b^2] for X a noncentral
/// chi-square variable with 2m degrees of freedom and noncentrality a^2.
double marcum_q(int order, double a, double b);

/// Smallest b >= 0 with marcum_q(order, a, b) = p, for 0 < p <= 1.
double inv_marcum_q_b(int order, double a, double p, const Tolerance& tol = {});

/// x >= 0 with reg_lower_gamma(a, x) = p, for 0 <= p < 1.
double inv_reg_lower_gamma(double a, double p, const Tolerance& tol = {});

}  // namespace clustersense::specfun
