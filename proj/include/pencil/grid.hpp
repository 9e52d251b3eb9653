#pragma once

#include <vector>

#include "pencil/types.hpp"

namespace pencil {

using CVec = std::vector<cplx>;

/// Uniform grid x_k = k pi / n on [0, pi].
struct Grid {
  int n = 200;

  int size() const { return n + 1; }
  double step() const { return kPi / n; }
  double x(int k) const { return k * kPi / n; }
};

/// Cumulative integral of f sampled on a uniform grid with step h, with the
/// value 0 at the first node.  Fourth order (Simpson pairs plus an end
/// correction on odd nodes).
CVec cumulative_simpson(const CVec& f, double h);

/// Integral of f over the whole grid (composite Simpson, fourth order).
cplx simpson(const CVec& f, double h);

/// Every stride-th sample of a fine-grid function.
CVec subsample(const CVec& fine, int stride);

}  // namespace pencil
