#include "clustersense/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace clustersense::specfun {
namespace {

constexpr double kSeriesEps = 1e-16;
constexpr int kSeriesMaxTerms = 1'000'000;
constexpr double kTiny = 1e-300;

// Poisson weights below this fraction of the modal weight are dropped at the
// starting end of the Marcum mixture sum.
constexpr double kLowWeightCut = 1e-18;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

void check_gamma_args(double a, double x) {
  require_finite(a, "gamma shape");
  require_finite(x, "gamma argument");
  if (a <= 0.0) throw DomainError("gamma shape must be positive");
  if (x < 0.0) throw DomainError("gamma argument must be nonnegative");
}

// log of x^a e^-x / Gamma(a), the common prefactor of both expansions.
double log_prefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

// Power series for P(a, x); converges quickly for x < a + 1.
double lower_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kSeriesMaxTerms; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kSeriesEps) {
      return sum * std::exp(log_prefactor(a, x));
    }
  }
  throw ConvergenceError("incomplete gamma series did not converge");
}

// Continued fraction for Q(a, x) (modified Lentz); used for x >= a + 1.
double upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kSeriesMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kSeriesEps) {
      return std::exp(log_prefactor(a, x)) * h;
    }
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

double clamp_unit(double p) { return std::clamp(p, 0.0, 1.0); }

// Finds x in [lo, hi] with g(x) = 0 for g nondecreasing, g(lo) <= 0 <= g(hi).
// Regula falsi steps, with a bisection step whenever the bracket failed to
// halve on the previous step.
template <class G>
double solve_bracketed(G&& g, double lo, double hi, double g_lo, double g_hi,
                       const Tolerance& tol) {
  bool bisect = false;
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double width = hi - lo;
    if (width <= tol.rel_eps * hi) return 0.5 * (lo + hi);

    double x = 0.5 * (lo + hi);
    if (!bisect && g_hi != g_lo) {
      const double secant = lo - g_lo * width / (g_hi - g_lo);
      if (secant > lo && secant < hi) x = secant;
    }
    const double gx = g(x);
    if (gx < 0.0) {
      lo = x;
      g_lo = gx;
    } else {
      hi = x;
      g_hi = gx;
    }
    bisect = (hi - lo) > 0.5 * width;
  }
  throw ConvergenceError("root finder exceeded " + std::to_string(tol.max_iter) +
                         " iterations; tolerance may be too tight");
}

// Grows hi geometrically from `start` until g(hi) >= 0, then solves.
template <class G>
double solve_from_zero(G&& g, double start, const Tolerance& tol) {
  double lo = 0.0;
  double g_lo = g(lo);
  if (g_lo >= 0.0) return 0.0;
  double hi = start;
  double g_hi = g(hi);
  for (int grow = 0; g_hi < 0.0; ++grow) {
    if (grow > 1000 || !std::isfinite(hi)) {
      throw ConvergenceError("could not bracket root");
    }
    lo = hi;
    g_lo = g_hi;
    hi *= 2.0;
    g_hi = g(hi);
  }
  return solve_bracketed(g, lo, hi, g_lo, g_hi, tol);
}

}  // namespace

void Tolerance::check() const {
  if (!(rel_eps > 0.0 && rel_eps < 1e-6)) {
    throw DomainError("tolerance rel_eps must lie in (0, 1e-6)");
  }
  if (max_iter < 50) throw DomainError("tolerance max_iter must be at least 50");
}

double reg_lower_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return clamp_unit(lower_series(a, x));
  return clamp_unit(1.0 - upper_fraction(a, x));
}

double reg_upper_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return clamp_unit(1.0 - lower_series(a, x));
  return clamp_unit(upper_fraction(a, x));
}

double marcum_q(int order, double a, double b) {
  if (order < 1) throw DomainError("Marcum Q order must be a positive integer");
  require_finite(a, "Marcum Q parameter a");
  require_finite(b, "Marcum Q parameter b");
  if (a < 0.0 || b < 0.0) throw DomainError("Marcum Q parameters must be nonnegative");

  if (b == 0.0) return 1.0;
  const double x = 0.5 * b * b;
  const double mu = 0.5 * a * a;
  if (mu == 0.0) return reg_upper_gamma(order, x);

  // Q_m(a, b) = sum_j Pois(j; mu) Q(m + j, x). Both Q(s, x) and its
  // complement P(s, x) obey first-order recurrences in s:
  //   Q(s + 1, x) = Q(s, x) + Pois(s; x),   P(s - 1, x) = P(s, x) + Pois(s - 1; x).
  // Above the mean of the statistic Q is summed upward from the lowest
  // significant mixture index; below it the complement is summed downward
  // from the highest, so every recurrence only adds positive terms.
  const double log_mu = std::log(mu);
  const double log_x = std::log(x);
  auto log_weight = [&](double j) { return -mu + j * log_mu - std::lgamma(j + 1.0); };

  const double mode = std::floor(mu);
  const double log_cut = log_weight(mode) + std::log(kLowWeightCut);

  if (x >= order + mu) {
    double j = mode;
    while (j > 0.0 && log_weight(j - 1.0) > log_cut) j -= 1.0;

    double s = order + j;
    double tail = reg_upper_gamma(s, x);
    double log_step = -x + s * log_x - std::lgamma(s + 1.0);
    double log_w = log_weight(j);
    double sum = 0.0;
    for (int n = 0; n < kSeriesMaxTerms; ++n) {
      const double w = std::exp(log_w);
      sum += w * tail;
      if (j > mode && (w <= kSeriesEps * sum || w == 0.0)) return clamp_unit(sum);

      tail = std::min(1.0, tail + std::exp(log_step));
      log_step += log_x - std::log(s + 1.0);
      log_w += log_mu - std::log(j + 1.0);
      s += 1.0;
      j += 1.0;
    }
    throw ConvergenceError("Marcum Q series did not converge");
  }

  double j_hi = mode;
  for (int n = 0; log_weight(j_hi + 1.0) > log_cut; ++n) {
    if (n >= kSeriesMaxTerms) throw ConvergenceError("Marcum Q series did not converge");
    j_hi += 1.0;
  }

  double s = order + j_hi;
  double head = reg_lower_gamma(s, x);
  double log_w = log_weight(j_hi);
  double complement = 0.0;
  for (double j = j_hi;; j -= 1.0) {
    const double w = std::exp(log_w);
    complement += w * head;
    if (j == 0.0 || (j < mode && (w <= kSeriesEps * complement || w == 0.0))) break;

    s -= 1.0;
    head = std::min(1.0, head + std::exp(-x + s * log_x - std::lgamma(s + 1.0)));
    log_w -= log_mu - std::log(j);
  }
  return clamp_unit(1.0 - complement);
}

double inv_marcum_q_b(int order, double a, double p, const Tolerance& tol) {
  if (order < 1) throw DomainError("Marcum Q order must be a positive integer");
  require_finite(a, "Marcum Q parameter a");
  require_finite(p, "target probability");
  if (a < 0.0) throw DomainError("Marcum Q parameter a must be nonnegative");
  if (p <= 0.0 || p > 1.0) throw DomainError("target probability must lie in (0, 1]");
  tol.check();
  if (p == 1.0) return 0.0;

  auto g = [&](double b) { return p - marcum_q(order, a, b); };
  const double start = a + std::sqrt(2.0 * order) + 1.0;
  return solve_from_zero(g, start, tol);
}

double inv_reg_lower_gamma(double a, double p, const Tolerance& tol) {
  require_finite(a, "gamma shape");
  require_finite(p, "target probability");
  if (a <= 0.0) throw DomainError("gamma shape must be positive");
  if (p < 0.0 || p >= 1.0) throw DomainError("target probability must lie in [0, 1)");
  tol.check();
  if (p == 0.0) return 0.0;

  auto g = [&](double x) { return reg_lower_gamma(a, x) - p; };
  return solve_from_zero(g, std::max(1.0, 2.0 * a), tol);
}

}  // namespace clustersense::specfun
