#include "pencil/special.hpp"

#include <array>
#include <cmath>

namespace pencil {

namespace {

constexpr int kMaxFactorial = 170;

const std::array<double, kMaxFactorial + 1>& factorial_table() {
  static const auto table = [] {
    std::array<double, kMaxFactorial + 1> t{};
    t[0] = 1.0;
    for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

}  // namespace

double factorial(int n) { return factorial_table().at(static_cast<size_t>(n)); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

cplx ipow(cplx z, int p) {
  cplx r = 1.0;
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

cplx sin_deriv(cplx z, int n) {
  switch (n % 4) {
    case 0: return std::sin(z);
    case 1: return std::cos(z);
    case 2: return -std::sin(z);
    default: return -std::cos(z);
  }
}

cplx cos_deriv(cplx z, int n) { return sin_deriv(z, n + 1); }

cplx sinc_deriv(cplx z, int n) {
  const double az = std::abs(z);
  if (az < 3.0 + 0.5 * n) {
    // j(z) = sum_k (-1)^k z^{2k} / (2k+1)!, differentiated termwise.
    cplx sum = 0.0;
    const int k0 = (n + 1) / 2;
    for (int k = k0; k < 80; ++k) {
      const int p = 2 * k - n;
      const double c = (k % 2 == 0 ? 1.0 : -1.0) * factorial(2 * k) /
                       (factorial(p) * factorial(2 * k + 1));
      const cplx term = c * ipow(z, p);
      sum += term;
      if (k > k0 + 4 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  // Leibniz on sin(z) * z^{-1}.
  cplx sum = 0.0;
  cplx zinv_pow = 1.0 / z;
  for (int k = 0; k <= n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += binomial(n, k) * sin_deriv(z, n - k) * sign * factorial(k) * zinv_pow;
    zinv_pow /= z;
  }
  return sum;
}

}  // namespace pencil
