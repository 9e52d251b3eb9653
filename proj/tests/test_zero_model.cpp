#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pencil/model_problem.hpp"
#include "pencil/zero_model.hpp"

using namespace pencil;
namespace zm = pencil::zero_model;

namespace {

cplx S_direct(double t, cplx l) { return std::abs(l) < 1e-6 ? cplx(t) : std::sin(l * t) / l; }

// Kernel by quadrature of its integral representation.
cplx D_quadrature(double x, cplx l, cplx m) {
  return oracle::simpson([&](double t) { return (l + m) * S_direct(t, l) * S_direct(t, m); }, 0.0, x);
}

}  // namespace

TEST(ZeroModel, SolutionValues) {
  EXPECT_LT(std::abs(zm::S(kPi, 1.0)), 1e-15);
  EXPECT_LT(std::abs(zm::S(kPi / 2, 1.0) - 1.0), 1e-15);
  // sin(z)/z = 1 - z^2/6 + ...: at l = 1e-9 the correction is below 1e-17.
  EXPECT_NEAR(zm::S(kPi, 1e-9).real(), kPi, 1e-14);
  EXPECT_NEAR(zm::Sx(kPi, 1.0).real(), -1.0, 1e-15);
}

TEST(ZeroModel, SolutionDerivativesMatchCauchyOracle) {
  for (double x : {0.3, 1.7, kPi}) {
    for (cplx l : {cplx(0.0), cplx(0.5, -0.04), cplx(2.0, 0.3)}) {
      for (int a = 0; a <= 4; ++a) {
        const cplx s = oracle::cauchy_deriv([&](cplx z) { return S_direct(x, z); }, l, a, 0.3);
        const cplx c = oracle::cauchy_deriv([&](cplx z) { return std::cos(z * x); }, l, a, 0.3);
        EXPECT_LT(std::abs(zm::S(x, l, a) - s), 1e-11) << x << " " << l << " " << a;
        EXPECT_LT(std::abs(zm::Sx(x, l, a) - c), 1e-11) << x << " " << l << " " << a;
      }
    }
  }
}

TEST(ZeroModel, KernelAtEigenvalues) {
  EXPECT_LT(std::abs(zm::D(kPi, 1.0, 2.0)), 1e-14);
  EXPECT_LT(std::abs(zm::D(kPi, 1.0, 1.0) - kPi), 1e-13);
  // Quadrature oracle for the coalesced kernel at 0.5.
  const cplx q = oracle::simpson(
      [](double t) { return cplx(2.0 * 0.5 * std::pow(std::sin(0.5 * t), 2) / 0.25); }, 0.0, kPi);
  EXPECT_LT(std::abs(q - 2.0 * kPi), 1e-10);
  EXPECT_LT(std::abs(zm::D(kPi, 0.5, 0.5) - q), 1e-10);
  for (int n = -4; n <= 4; ++n) {
    for (int k = -4; k <= 4; ++k) {
      if (n == 0 || k == 0 || n == k) continue;
      EXPECT_LT(std::abs(zm::D(kPi, n, k)), 1e-12) << n << " " << k;
    }
  }
}

TEST(ZeroModel, KernelMatchesQuadrature) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ux(0.0, kPi);
  for (int i = 0; i < 40; ++i) {
    const double x = ux(rng);
    const cplx l(u(rng), 0.3 * u(rng)), m(u(rng), 0.3 * u(rng));
    EXPECT_LT(std::abs(zm::D(x, l, m) - D_quadrature(x, l, m)), 1e-10);
  }
}

TEST(ZeroModel, MuDerivativeMatchesFiniteDifference) {
  const double h = 1e-5;
  const cplx fd = (zm::D(kPi, 2.0, 0.5 + h) - zm::D(kPi, 2.0, 0.5 - h)) / (2.0 * h);
  EXPECT_LT(oracle::rel(zm::D(kPi, 2.0, 0.5, 0, 1), fd), 1e-8);
}

TEST(ZeroModel, MuDerivativeAtCoalescenceMatchesQuadrature) {
  // d/dm of int_0^pi (l + m) S(l) S(m) at l = m = 0.5.
  const double l = 0.5;
  const cplx q = oracle::simpson(
      [&](double t) {
        const double s = std::sin(l * t) / l;
        const double ds = (t * std::cos(l * t) * l - std::sin(l * t)) / (l * l);
        return cplx(s * s + 2.0 * l * s * ds);
      },
      0.0, kPi);
  EXPECT_LT(std::abs(zm::D(kPi, l, l, 0, 1) - q), 1e-10);
}

TEST(ZeroModel, MixedDerivativesMatchCauchyOracle) {
  // Values are checked against quadrature above; derivatives come from
  // contour integrals of the values.
  const double x = 2.2;
  for (auto [l, m] : {std::pair<cplx, cplx>{0.6, 0.4 - 0.04 * kI}, {1.0, -1.0}, {0.5, 0.5}, {2.0, 0.05}}) {
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; b <= 2; ++b) {
        // Nested Cauchy integrals in both arguments.
        const cplx expect = oracle::cauchy_deriv(
            [&](cplx z) {
              return oracle::cauchy_deriv([&](cplx w) { return zm::D(x, z, w); }, m, b, 0.3, 64);
            },
            l, a, 0.3, 64);
        EXPECT_LT(std::abs(zm::D(x, l, m, a, b) - expect), 1e-8) << l << " " << m << " " << a << b;
      }
    }
  }
}

TEST(ZeroModel, ClosedFormsAgreeOnOverlaps) {
  using F = zm::KernelForm;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  for (int i = 0; i < 200; ++i) {
    const double x = 1.0;
    // Overlap of series and product forms: 0.5 <= |l|, |m| <= 2.5.
    const cplx l = 1.5 * std::exp(kI * ang(rng)) * 0.9, m = 0.8 * std::exp(kI * ang(rng));
    for (int a = 0; a <= 3; ++a) {
      for (int b = 0; b <= 3; ++b) {
        const cplx s = zm::D_with_form(F::Series, x, l, m, a, b);
        const cplx p = zm::D_with_form(F::ProductToSum, x, l, m, a, b);
        EXPECT_LT(std::abs(s - p), 1e-10 * (1.0 + std::abs(s)));
        if (std::abs(l - m) * x > 1.0) {
          const cplx d = zm::D_with_form(F::DividedDifference, x, l, m, a, b);
          EXPECT_LT(std::abs(s - d), 1e-10 * (1.0 + std::abs(s)));
        }
      }
    }
  }
}

TEST(ZeroModel, KernelIsSymmetric) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-6.0, 6.0), ux(0.0, kPi);
  for (int i = 0; i < 100; ++i) {
    const double x = ux(rng);
    const cplx l(u(rng), 0.2 * u(rng)), m(u(rng), 0.2 * u(rng));
    EXPECT_LT(std::abs(zm::D(x, l, m) - zm::D(x, m, l)), 1e-12 * (1.0 + std::abs(zm::D(x, l, m))));
    EXPECT_LT(std::abs(zm::D(x, l, m, 1, 2) - zm::D(x, m, l, 2, 1)), 1e-10 * (1.0 + std::abs(zm::D(x, l, m, 1, 2))));
  }
}

TEST(ZeroModel, XDerivative) {
  EXPECT_EQ(zm::Dx(0.0, 1.3, 0.7), cplx(0.0));
  EXPECT_LT(std::abs(zm::Dx(kPi / 2, 1.0, 1.0) - 2.0), 1e-15);
  const double h = 1e-5;
  const cplx l = 1.3, m(0.7, 0.2);
  const cplx fd = (zm::D(1.0 + h, l, m) - zm::D(1.0 - h, l, m)) / (2.0 * h);
  EXPECT_LT(oracle::rel(zm::Dx(1.0, l, m), fd), 1e-8);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0), ux(0.1, kPi - 0.1);
  for (int i = 0; i < 50; ++i) {
    const double x = ux(rng);
    const cplx a(u(rng), 0.1 * u(rng)), b(u(rng), 0.1 * u(rng));
    const cplx fdr = (zm::D(x + h, a, b) - zm::D(x - h, a, b)) / (2.0 * h);
    EXPECT_LT(std::abs(zm::Dx(x, a, b) - fdr), 1e-7 * (1.0 + std::abs(fdr)));
  }
}

TEST(ZeroModel, WeylFunctionIsRegularAtZero) {
  EXPECT_LT(std::abs(zm::weyl(0.0) + 1.0 / kPi), 1e-15);
  EXPECT_LT(std::abs(zm::weyl(0.3) + 0.3 / std::tan(0.3 * kPi)), 1e-14);
}

TEST(ZeroModel, OrderLimit) {
  auto bg = BackgroundProblem::zero();
  EXPECT_NO_THROW(bg->D_model_mu_deriv(1.0, 0.5, 0.5, kMaxMuOrder));
  try {
    bg->D_model_mu_deriv(1.0, 0.5, 0.5, kMaxMuOrder + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderTooHigh);
  }
  EXPECT_EQ(bg->D_model_mu_deriv(1.0, 2.0, 0.5, 0), bg->D_model(1.0, 2.0, 0.5));
}

TEST(ZeroModel, ModelSpectralData) {
  auto bg = BackgroundProblem::zero();
  const SpectralDataSet d1 = bg->model_spectral_data(1);
  EXPECT_EQ(d1.entries().size(), 2u);
  EXPECT_EQ(d1.lambda(-1), cplx(-1.0));
  EXPECT_LT(std::abs(d1.M(-1) - 1.0 / kPi), 1e-16);
  const SpectralDataSet d3 = bg->model_spectral_data(3);
  EXPECT_EQ(d3.groups().size(), 6u);
  const auto alpha = weights_from_residues(d3);
  for (int n : {-3, -2, -1, 1, 2, 3}) EXPECT_LT(std::abs(alpha.at(n) - kPi / n), 1e-14);
}
