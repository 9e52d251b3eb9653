#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pencil/special.hpp"

using namespace pencil;

namespace {

cplx sinc_direct(cplx z) { return std::abs(z) < 1e-3 ? 1.0 - z * z / 6.0 + z * z * z * z / 120.0 : std::sin(z) / z; }

}  // namespace

TEST(Special, FactorialAndBinomial) {
  EXPECT_EQ(factorial(0), 1.0);
  EXPECT_EQ(factorial(5), 120.0);
  EXPECT_EQ(binomial(6, 2), 15.0);
  EXPECT_EQ(binomial(3, 5), 0.0);
}

TEST(Special, IntegerPowerKeepsZeroToTheZero) {
  EXPECT_EQ(ipow(0.0, 0), cplx(1.0));
  EXPECT_EQ(ipow(cplx(0.0, 2.0), 3), cplx(0.0, -8.0));
}

TEST(Special, SincValueMatchesDirectFormula) {
  for (cplx z : {cplx(0.0), cplx(0.3, 0.1), cplx(2.9, 0.0), cplx(3.1, -0.4), cplx(10.0, 2.0)}) {
    EXPECT_LT(std::abs(sinc_deriv(z, 0) - sinc_direct(z)), 1e-14) << z;
  }
}

TEST(Special, SincDerivativesMatchCauchyOracle) {
  // Points on both sides of the series/Leibniz switch |z| = 3 + n/2.
  const cplx pts[] = {cplx(0.0), cplx(0.7, -0.2), cplx(2.99, 0.0), cplx(3.01, 0.0), cplx(3.4, 0.3),
                      cplx(4.6, -0.5), cplx(-6.0, 1.0), cplx(12.0, 0.5)};
  for (int n = 1; n <= 6; ++n) {
    for (cplx z : pts) {
      const cplx expect = oracle::cauchy_deriv(sinc_direct, z, n, 0.5);
      EXPECT_LT(std::abs(sinc_deriv(z, n) - expect), 1e-11 * (1.0 + std::abs(expect))) << "n=" << n << " z=" << z;
    }
  }
}

TEST(Special, TrigDerivativesCycle) {
  const cplx z(0.4, 0.2);
  EXPECT_LT(std::abs(sin_deriv(z, 5) - std::cos(z)), 1e-15);
  EXPECT_LT(std::abs(cos_deriv(z, 2) + std::cos(z)), 1e-15);
}
