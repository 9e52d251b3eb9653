#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pencil/spectral_data.hpp"

namespace pencil {

/// Sum of the principal parts of M at the groups with |start| <= n_star:
/// sum_k sum_nu M_{k+nu} / (l - l_k)^{nu+1}.
cplx rational_part(const SpectralDataSet& set, int n_star, cplx lambda);

/// Difference of the rational parts of data and model.
cplx rational_difference(const SpectralDataSet& data, const SpectralDataSet& model, int n_star,
                         cplx lambda);

/// Contour form of the main equation for the zero background,
///   v(l) = S(l) + (1 / 2 pi i) \oint D(l, m) Mhat(m) v(m) dm,
/// discretized by the trapezoid rule on |m - center| = radius.
class ContourMainEquation {
 public:
  ContourMainEquation(const SpectralDataSet& data, const SpectralDataSet& model, int n_star,
                      cplx center, double radius, int nodes = 256);

  /// Solves for v at the contour nodes for the given x.
  void solve(double x);

  /// (1/nu!) d^nu v / dl^nu at l, using the continuation of the last solve.
  cplx value(cplx lambda, int nu = 0) const;

  const std::vector<cplx>& nodes() const { return mu_; }

 private:
  std::vector<cplx> mu_;
  std::vector<cplx> weight_;  // (m_j - center) Mhat(m_j) / K
  double x_ = 0.0;
  Eigen::VectorXcd v_;
};

}  // namespace pencil
