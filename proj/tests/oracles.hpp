#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "pencil/types.hpp"

namespace oracle {

using pencil::cplx;

/// n-th derivative of an analytic f at z via the Cauchy integral on a circle.
inline cplx cauchy_deriv(const std::function<cplx(cplx)>& f, cplx z, int n, double r = 0.25,
                         int nodes = 256) {
  cplx sum = 0.0;
  for (int l = 0; l < nodes; ++l) {
    const cplx w = r * std::exp(cplx(0.0, 2.0 * M_PI * l / nodes));
    sum += f(z + w) / std::pow(w, n);
  }
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return fact * sum / static_cast<double>(nodes);
}

/// Composite Simpson rule with 2m intervals.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int m = 2000) {
  const int n = 2 * m;
  const double h = (b - a) / n;
  cplx s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Number of zeros of f inside the circle by unwrapping the phase on a dense
/// sampling of the boundary.
inline int phase_winding(const std::function<cplx(cplx)>& f, cplx c, double r, int samples = 2048) {
  double total = 0.0;
  double prev = std::arg(f(c + r));
  for (int l = 1; l <= samples; ++l) {
    const double cur = std::arg(f(c + r * std::exp(cplx(0.0, 2.0 * M_PI * l / samples))));
    double d = cur - prev;
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    total += d;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace oracle
