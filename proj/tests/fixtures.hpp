#pragma once

#include <random>

#include "pencil/experiments.hpp"

namespace fixture {

using namespace pencil;

/// Potentials recovered from the split data over the zero background,
/// computed once per process.
inline const RecoveredPotentials& recovered_split(double delta) {
  static std::map<double, RecoveredPotentials> cache;
  auto it = cache.find(delta);
  if (it == cache.end()) {
    it = cache.emplace(delta, run_algorithm1(make_split_data(delta), BackgroundProblem::zero())).first;
  }
  return it->second;
}

/// Smooth complex q1 and q0 built from a few random Fourier modes, scaled so
/// that max |q1|, max |q0| <= 1.  sigma is integrated exactly.
inline PotentialPair random_smooth(unsigned seed, int n = 200) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int modes = 4;
  std::vector<cplx> a(modes), b(modes);
  for (int j = 0; j < modes; ++j) {
    a[static_cast<size_t>(j)] = cplx(u(rng), u(rng)) / (std::sqrt(2.0) * modes);
    b[static_cast<size_t>(j)] = cplx(u(rng), u(rng)) / (std::sqrt(2.0) * modes);
  }
  PotentialPair p = PotentialPair::zero(n);
  for (int k = 0; k <= n; ++k) {
    const double x = p.grid.x(k);
    cplx q1 = 0.0, sigma = 0.0;
    for (int j = 0; j < modes; ++j) {
      const auto uj = static_cast<size_t>(j);
      q1 += a[uj] * std::cos((j + 1) * x);
      // q0 = sum b_j cos(j x), integrated from 0.
      sigma += j == 0 ? b[uj] * x : b[uj] * std::sin(j * x) / double(j);
    }
    p.q1[static_cast<size_t>(k)] = q1;
    p.sigma[static_cast<size_t>(k)] = sigma;
  }
  return p;
}

}  // namespace fixture
