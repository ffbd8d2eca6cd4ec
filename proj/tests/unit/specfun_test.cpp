#include "clustersense/specfun.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"

namespace clustersense::specfun {
namespace {

using oracle::rel_err;

// Frozen from the quadrature / Poisson-mixture oracles (agreeing with a
// 40-digit reference to all printed digits).
constexpr double kLowerGamma5At4p7 = 0.50539121391520882914;
constexpr double kMarcumQ4At1p5_2p5 = 0.77771089843396511338;

const std::vector<int> kOrders = {1, 2, 4, 8, 16, 32};
const std::vector<double> kAs = {0.0, 0.5, 1.0, 2.0, 5.0};
const std::vector<double> kBs = {0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0};

TEST(RegLowerGamma, ClosedFormsAndBoundaries) {
  EXPECT_NEAR(reg_lower_gamma(1.0, std::log(2.0)), 0.5, 1e-15);
  EXPECT_EQ(reg_lower_gamma(3.0, 0.0), 0.0);
  EXPECT_EQ(reg_upper_gamma(3.0, 0.0), 1.0);
  EXPECT_NEAR(reg_lower_gamma(2.0, 300.0), 1.0, 1e-15);
}

TEST(RegLowerGamma, MatchesQuadratureOracle) {
  EXPECT_LE(rel_err(oracle::quad_reg_lower_gamma(5.0, 4.7), kLowerGamma5At4p7), 1e-13);
  EXPECT_LE(rel_err(reg_lower_gamma(5.0, 4.7), kLowerGamma5At4p7), 1e-10);

  for (double a : {0.5, 1.0, 2.5, 5.0, 10.0, 32.0}) {
    for (double x : {0.1, 0.7, 2.0, 4.7, 9.0, 20.0, 40.0}) {
      const double want = oracle::quad_reg_lower_gamma(a, x);
      EXPECT_LE(rel_err(reg_lower_gamma(a, x), want), 1e-10) << "a=" << a << " x=" << x;
    }
  }
}

TEST(RegLowerGamma, ComplementarityAcrossBothExpansions) {
  for (double a : {0.3, 1.0, 4.0, 17.5, 120.0}) {
    for (double x : {0.01, 0.5, a, a + 0.999, a + 1.0, 2.0 * a + 3.0, 5.0 * a + 10.0}) {
      EXPECT_NEAR(reg_lower_gamma(a, x) + reg_upper_gamma(a, x), 1.0, 1e-12)
          << "a=" << a << " x=" << x;
    }
  }
}

TEST(RegLowerGamma, StrictlyIncreasing) {
  for (double a : {0.5, 3.0, 40.0}) {
    double prev = reg_lower_gamma(a, 0.0);
    for (double x = 0.05; x < 3.0 * a + 10.0; x += 0.05) {
      const double cur = reg_lower_gamma(a, x);
      EXPECT_GE(cur, prev);
      if (reg_upper_gamma(a, x) > 1e-12) EXPECT_GT(cur, prev) << "a=" << a << " x=" << x;
      prev = cur;
    }
  }
}

TEST(RegLowerGamma, DomainErrors) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(reg_lower_gamma(0.0, 1.0), DomainError);
  EXPECT_THROW(reg_lower_gamma(-1.0, 1.0), DomainError);
  EXPECT_THROW(reg_lower_gamma(1.0, -0.1), DomainError);
  EXPECT_THROW(reg_lower_gamma(nan, 1.0), DomainError);
  EXPECT_THROW(reg_lower_gamma(1.0, inf), DomainError);
  EXPECT_THROW(reg_upper_gamma(1.0, nan), DomainError);
}

TEST(MarcumQ, CentralCaseIsRayleighTail) {
  for (double b : {0.1, 1.0, 2.5, 6.0}) {
    EXPECT_LE(rel_err(marcum_q(1, 0.0, b), std::exp(-0.5 * b * b)), 1e-13);
  }
  EXPECT_EQ(marcum_q(3, 2.0, 0.0), 1.0);
}

TEST(MarcumQ, MatchesPoissonMixtureOracle) {
  EXPECT_LE(rel_err(oracle::poisson_mixture_marcum_q(4, 1.5, 2.5), kMarcumQ4At1p5_2p5), 1e-13);
  EXPECT_LE(rel_err(marcum_q(4, 1.5, 2.5), kMarcumQ4At1p5_2p5), 1e-10);

  for (int m : kOrders) {
    for (double a : kAs) {
      for (double b : kBs) {
        const double want = oracle::poisson_mixture_marcum_q(m, a, b);
        EXPECT_LE(rel_err(marcum_q(m, a, b), want), 1e-10) << "m=" << m << " a=" << a
                                                          << " b=" << b;
      }
    }
  }
}

TEST(MarcumQ, LargeNoncentralityStaysAccurate) {
  // Parameter range of long sensing windows at high SNR.
  for (int m : {50, 200}) {
    for (double gamma : {0.3, 3.0, 10.0}) {
      const double a = std::sqrt(2.0 * m * gamma);
      for (double scale : {0.8, 1.0, 1.2}) {
        const double b = scale * std::sqrt(2.0 * m + a * a);
        const double want = oracle::poisson_mixture_marcum_q(m, a, b);
        EXPECT_LE(rel_err(marcum_q(m, a, b), want), 1e-9)
            << "m=" << m << " gamma=" << gamma << " b=" << b;
      }
    }
  }
}

TEST(MarcumQ, BridgesToCentralChiSquare) {
  for (int m : kOrders) {
    for (double b : kBs) {
      EXPECT_NEAR(marcum_q(m, 0.0, b), 1.0 - reg_lower_gamma(m, 0.5 * b * b), 1e-12);
    }
  }
}

TEST(MarcumQ, Monotonicity) {
  for (int m : kOrders) {
    for (double a : kAs) {
      double prev = 1.0;
      for (double b = 0.05; b < 15.0; b += 0.05) {
        const double q = marcum_q(m, a, b);
        EXPECT_LE(q, prev);
        if (prev > 1e-300 && prev < 1.0 - 1e-15) EXPECT_LT(q, prev);
        prev = q;
      }
    }
  }
  for (int m : kOrders) {
    for (double b : kBs) {
      for (std::size_t i = 1; i < kAs.size(); ++i) {
        EXPECT_GE(marcum_q(m, kAs[i], b), marcum_q(m, kAs[i - 1], b));
      }
    }
  }
  for (double a : kAs) {
    for (double b : kBs) {
      for (std::size_t i = 1; i < kOrders.size(); ++i) {
        EXPECT_GE(marcum_q(kOrders[i], a, b), marcum_q(kOrders[i - 1], a, b));
      }
    }
  }
}

TEST(MarcumQ, DomainErrors) {
  EXPECT_THROW(marcum_q(0, 1.0, 1.0), DomainError);
  EXPECT_THROW(marcum_q(1, -1.0, 1.0), DomainError);
  EXPECT_THROW(marcum_q(1, 1.0, -1.0), DomainError);
  EXPECT_THROW(marcum_q(1, std::numeric_limits<double>::infinity(), 1.0), DomainError);
}

TEST(InvMarcumQ, ClosedFormsAndBoundary) {
  EXPECT_NEAR(inv_marcum_q_b(1, 0.0, 0.5), std::sqrt(2.0 * std::log(2.0)), 1e-9);
  EXPECT_EQ(inv_marcum_q_b(7, 3.0, 1.0), 0.0);
  const double q = marcum_q(4, 1.5, 2.5);
  EXPECT_NEAR(inv_marcum_q_b(4, 1.5, q), 2.5, 1e-8);
}

TEST(InvMarcumQ, RoundTripGrid) {
  for (int m : kOrders) {
    for (double a : kAs) {
      for (int k = 1; k <= 99; ++k) {
        const double p = k / 100.0;
        const double b = inv_marcum_q_b(m, a, p);
        EXPECT_NEAR(marcum_q(m, a, b), p, 1e-8) << "m=" << m << " a=" << a << " p=" << p;
      }
    }
  }
}

TEST(InvMarcumQ, ErrorsAndTightTolerance) {
  EXPECT_THROW(inv_marcum_q_b(2, 1.0, 0.0), DomainError);
  EXPECT_THROW(inv_marcum_q_b(2, 1.0, 1.5), DomainError);
  EXPECT_THROW(inv_marcum_q_b(0, 1.0, 0.5), DomainError);
  // A relative width below one ulp can never be reached.
  EXPECT_THROW(inv_marcum_q_b(2, 1.0, 0.5, Tolerance{1e-18, 60}), ConvergenceError);
  EXPECT_THROW(inv_marcum_q_b(2, 1.0, 0.5, Tolerance{1e-3, 200}), DomainError);
  EXPECT_THROW(inv_marcum_q_b(2, 1.0, 0.5, Tolerance{1e-10, 10}), DomainError);
}

TEST(InvRegLowerGamma, ClosedFormsAndRoundTrip) {
  EXPECT_NEAR(inv_reg_lower_gamma(1.0, 0.5), std::log(2.0), 1e-9);
  EXPECT_EQ(inv_reg_lower_gamma(2.0, 0.0), 0.0);
  const double q = reg_lower_gamma(5.0, 4.7);
  EXPECT_NEAR(inv_reg_lower_gamma(5.0, q), 4.7, 1e-8);

  for (double a : {0.5, 1.0, 3.0, 20.0, 150.0}) {
    for (double p : {0.001, 0.1, 0.5, 0.9, 0.999}) {
      EXPECT_NEAR(reg_lower_gamma(a, inv_reg_lower_gamma(a, p)), p, 1e-8);
    }
  }
}

TEST(InvRegLowerGamma, DomainErrors) {
  EXPECT_THROW(inv_reg_lower_gamma(1.0, 1.0), DomainError);
  EXPECT_THROW(inv_reg_lower_gamma(1.0, -0.1), DomainError);
  EXPECT_THROW(inv_reg_lower_gamma(0.0, 0.5), DomainError);
}

}  // namespace
}  // namespace clustersense::specfun
