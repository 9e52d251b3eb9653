#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "pencil/forward.hpp"
#include "pencil/spectral_data.hpp"
#include "pencil/zero_model.hpp"

namespace pencil {

/// Highest mu-derivative order of the kernel exposed to callers.
inline constexpr int kMaxMuOrder = 4;

/// The reference problem of the spectral-mapping method: either the
/// unperturbed pencil (closed forms) or a pencil given by potentials on a
/// grid (evaluated through the shooting integrator).
class BackgroundProblem {
 public:
  enum class Kind { ZeroPotential, Numeric };

  static std::shared_ptr<const BackgroundProblem> zero();

  /// Numeric background with spectral data supplied by the caller.
  static std::shared_ptr<const BackgroundProblem> numeric(PotentialPair potentials,
                                                          SpectralDataSet spectral,
                                                          int refine = 10);

  /// Numeric background whose spectral data (|n| <= n_max) is computed by the
  /// forward solver.
  static std::shared_ptr<const BackgroundProblem> numeric_from_potentials(
      PotentialPair potentials, int n_max, cplx omega0, const EigenSearchOptions& search = {},
      int refine = 10);

  Kind kind() const { return kind_; }
  const SpectralDataSet& spectral_data() const { return spectral_; }
  cplx omega0() const { return spectral_.omega0(); }

  /// Numeric kind only.
  const Shooter& shooter() const;
  const Grid& grid() const;

  /// q1 of the background at node k of its grid (0 for the zero kind).
  cplx q1_at(const Grid& grid, int k) const;

  /// S(x, l) and its x-derivative; numeric kind requires x on the
  /// integration grid.
  cplx S_model(double x, cplx lambda) const;
  cplx S_model_x(double x, cplx lambda) const;
  cplx D_model(double x, cplx lambda, cplx mu) const;
  /// p-th mu-derivative of D, p <= kMaxMuOrder.
  cplx D_model_mu_deriv(double x, cplx lambda, cplx mu, int p) const;
  cplx D_model_x_deriv(double x, cplx lambda, cplx mu) const;

  /// Zero kind: lambda_n = n, M_n = -n/pi for 1 <= |n| <= N.
  SpectralDataSet model_spectral_data(int N) const;

 private:
  BackgroundProblem() = default;
  int node_of(double x) const;

  Kind kind_ = Kind::ZeroPotential;
  SpectralDataSet spectral_;
  std::optional<Shooter> shooter_;
};

/// A spectral point at which S and D derivatives are tabulated.
struct KernelPoint {
  cplx lambda;
  int order = 0;
};

/// Values of S, S', D and dD/dx (with derivatives in the spectral arguments)
/// at the nodes of an output grid for a fixed list of spectral points.  For the
/// zero kind values are computed on demand from the closed forms; for the
/// numeric kind the integrator traces and kernel integrals are tabulated once.
class KernelTable {
 public:
  KernelTable(std::shared_ptr<const BackgroundProblem> background, Grid grid,
              std::vector<KernelPoint> points);

  const Grid& grid() const { return grid_; }
  size_t point_count() const { return points_.size(); }

  /// d^a/dl^a S(x_k, l_p).
  cplx S(int k, size_t p, int a) const;
  /// d^a/dl^a S'(x_k, l_p) (plain x-derivative).
  cplx Sx(int k, size_t p, int a) const;
  /// d^a/dl^a d^b/dm^b D(x_k, l_p, l_r).
  cplx D(int k, size_t p, size_t r, int a, int b) const;
  /// Same for dD/dx = (l + m - 2 q1) S(l) S(m).
  cplx Dx(int k, size_t p, size_t r, int a, int b) const;
  cplx q1(int k) const;

 private:
  cplx D_numeric(int k, size_t p, size_t r, int a, int b) const;

  std::shared_ptr<const BackgroundProblem> bg_;
  Grid grid_;
  std::vector<KernelPoint> points_;
  int stride_ = 1;
  // Numeric kind: traces per point and order on the integration grid.
  std::vector<std::vector<CVec>> S_;
  std::vector<std::vector<CVec>> Sx_;
  // Cumulative kernel integrals for close pairs, keyed by (p, r, a, b).
  std::map<std::array<size_t, 4>, CVec> close_;
};

}  // namespace pencil
