#include "pencil/contour.hpp"

#include <cmath>
#include <sstream>

#include "pencil/special.hpp"
#include "pencil/zero_model.hpp"

namespace pencil {

cplx rational_part(const SpectralDataSet& set, int n_star, cplx lambda) {
  cplx sum = 0.0;
  for (const Group& g : set.groups()) {
    if (std::abs(g.start) > n_star) continue;
    const cplx inv = 1.0 / (lambda - g.lambda);
    cplx p = inv;
    for (int nu = 0; nu < g.multiplicity; ++nu) {
      sum += set.M(g.member(nu)) * p;
      p *= inv;
    }
  }
  // Simple tail entries inside |n| <= n_star beyond the window.
  for (int n = set.window() + 1; n <= n_star; ++n) {
    for (int s : {-n, n}) sum += set.M(s) / (lambda - set.lambda(s));
  }
  return sum;
}

cplx rational_difference(const SpectralDataSet& data, const SpectralDataSet& model, int n_star,
                         cplx lambda) {
  return rational_part(data, n_star, lambda) - rational_part(model, n_star, lambda);
}

ContourMainEquation::ContourMainEquation(const SpectralDataSet& data, const SpectralDataSet& model,
                                         int n_star, cplx center, double radius, int nodes) {
  mu_.resize(static_cast<size_t>(nodes));
  weight_.resize(static_cast<size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    const cplx w = radius * std::exp(kI * (2.0 * kPi * j / nodes));
    mu_[static_cast<size_t>(j)] = center + w;
    weight_[static_cast<size_t>(j)] =
        w * rational_difference(data, model, n_star, center + w) / static_cast<double>(nodes);
  }
}

void ContourMainEquation::solve(double x) {
  x_ = x;
  const auto K = static_cast<Eigen::Index>(mu_.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(K, K);
  Eigen::VectorXcd rhs(K);
  for (Eigen::Index l = 0; l < K; ++l) {
    rhs(l) = zero_model::S(x, mu_[static_cast<size_t>(l)]);
    for (Eigen::Index j = 0; j < K; ++j) {
      A(l, j) -= zero_model::D(x, mu_[static_cast<size_t>(l)], mu_[static_cast<size_t>(j)]) *
                 weight_[static_cast<size_t>(j)];
    }
  }
  v_ = A.partialPivLu().solve(rhs);
}

cplx ContourMainEquation::value(cplx lambda, int nu) const {
  cplx sum = zero_model::S(x_, lambda, nu);
  for (size_t j = 0; j < mu_.size(); ++j) {
    sum += zero_model::D(x_, lambda, mu_[j], nu, 0) * weight_[j] * v_(static_cast<Eigen::Index>(j));
  }
  return sum / factorial(nu);
}

}  // namespace pencil
