#include "pencil/zero_model.hpp"

#include <array>
#include <cmath>
#include <string>

#include "pencil/special.hpp"

namespace pencil::zero_model {

namespace {

constexpr int kSeriesTerms = 26;

void check_orders(int a, int b) {
  if (a < 0 || b < 0 || a + b > kMaxKernelOrder) {
    throw Error(ErrorKind::OrderTooHigh,
                "kernel derivative orders (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  }
}

// d^a/dz^a z^p evaluated from a table of powers.
cplx mono_deriv(const std::array<cplx, 2 * kSeriesTerms + 2>& pw, int p, int a) {
  if (a > p) return 0.0;
  double c = 1.0;
  for (int i = 0; i < a; ++i) c *= (p - i);
  return c * pw[static_cast<size_t>(p - a)];
}

cplx D_series(double x, cplx l, cplx m, int a, int b) {
  std::array<cplx, 2 * kSeriesTerms + 2> pl{}, pm{};
  pl[0] = pm[0] = 1.0;
  for (size_t i = 1; i < pl.size(); ++i) {
    pl[i] = pl[i - 1] * l;
    pm[i] = pm[i - 1] * m;
  }
  cplx sum = 0.0;
  for (int k = 0; k < kSeriesTerms; ++k) {
    for (int j = 0; j < kSeriesTerms; ++j) {
      const double c = (((k + j) % 2 == 0) ? 1.0 : -1.0) /
                       (factorial(2 * k + 1) * factorial(2 * j + 1) * (2 * k + 2 * j + 3));
      const double xp = std::pow(x, 2 * k + 2 * j + 3);
      const cplx t = mono_deriv(pl, 2 * k + 1, a) * mono_deriv(pm, 2 * j, b) +
                     mono_deriv(pl, 2 * k, a) * mono_deriv(pm, 2 * j + 1, b);
      sum += c * xp * t;
    }
  }
  return sum;
}

// d^i/dl^i d^k/dm^k (1/l + 1/m).
cplx inv_sum_deriv(cplx l, cplx m, int i, int k) {
  if (i == 0 && k == 0) return 1.0 / l + 1.0 / m;
  if (i > 0 && k > 0) return 0.0;
  const int q = i > 0 ? i : k;
  const cplx z = i > 0 ? l : m;
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;
  return sign * factorial(q) / ipow(z, q + 1);
}

cplx D_product(double x, cplx l, cplx m, int a, int b) {
  const cplx zm = (l - m) * x;
  const cplx zp = (l + m) * x;
  cplx sum = 0.0;
  for (int i = 0; i <= a; ++i) {
    for (int k = 0; k <= b; ++k) {
      const cplx f = inv_sum_deriv(l, m, i, k);
      if (f == 0.0) continue;
      const int p = a - i;
      const int q = b - k;
      const double sign = (q % 2 == 0) ? 1.0 : -1.0;
      const cplx g = std::pow(x, p + q) * (sign * sinc_deriv(zm, p + q) - sinc_deriv(zp, p + q));
      sum += binomial(a, i) * binomial(b, k) * f * g;
    }
  }
  return 0.5 * x * sum;
}

cplx D_divided(double x, cplx l, cplx m, int a, int b) {
  // (l - m) D = N  =>  D^{(a,b)} = (N^{(a,b)} - a D^{(a-1,b)} + b D^{(a,b-1)}) / (l - m).
  std::array<std::array<cplx, kMaxKernelOrder + 1>, kMaxKernelOrder + 1> d{};
  const cplx inv = 1.0 / (l - m);
  for (int i = 0; i <= a; ++i) {
    for (int k = 0; k <= b; ++k) {
      cplx v = S(x, l, i) * Sx(x, m, k) - Sx(x, l, i) * S(x, m, k);
      if (i > 0) v -= static_cast<double>(i) * d[i - 1][k];
      if (k > 0) v += static_cast<double>(k) * d[i][k - 1];
      d[i][k] = v * inv;
    }
  }
  return d[a][b];
}

}  // namespace

cplx S(double x, cplx lambda, int a) {
  return std::pow(x, a + 1) * sinc_deriv(lambda * x, a);
}

cplx Sx(double x, cplx lambda, int a) {
  return std::pow(x, a) * cos_deriv(lambda * x, a);
}

KernelForm select_form(double x, cplx lambda, cplx mu) {
  const double lo = std::min(std::abs(lambda), std::abs(mu)) * x;
  const double hi = std::max(std::abs(lambda), std::abs(mu)) * x;
  if (hi <= 2.5) return KernelForm::Series;
  if (lo >= 0.5) return KernelForm::ProductToSum;
  return KernelForm::DividedDifference;
}

cplx D_with_form(KernelForm form, double x, cplx lambda, cplx mu, int a, int b) {
  check_orders(a, b);
  if (x == 0.0) return 0.0;
  switch (form) {
    case KernelForm::Series: return D_series(x, lambda, mu, a, b);
    case KernelForm::ProductToSum: return D_product(x, lambda, mu, a, b);
    case KernelForm::DividedDifference: return D_divided(x, lambda, mu, a, b);
  }
  return 0.0;
}

cplx D(double x, cplx lambda, cplx mu, int a, int b) {
  return D_with_form(select_form(x, lambda, mu), x, lambda, mu, a, b);
}

cplx Dx(double x, cplx lambda, cplx mu, int a, int b) {
  check_orders(a, b);
  cplx v = (lambda + mu) * S(x, lambda, a) * S(x, mu, b);
  if (a > 0) v += static_cast<double>(a) * S(x, lambda, a - 1) * S(x, mu, b);
  if (b > 0) v += static_cast<double>(b) * S(x, lambda, a) * S(x, mu, b - 1);
  return v;
}

cplx weyl(cplx lambda) {
  const cplx z = kPi * lambda;
  return -std::cos(z) / (kPi * sinc_deriv(z, 0));
}

}  // namespace pencil::zero_model
