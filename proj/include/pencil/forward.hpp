#pragma once

#include <array>
#include <map>
#include <vector>

#include "pencil/grid.hpp"
#include "pencil/parallel.hpp"
#include "pencil/spectral_data.hpp"

namespace pencil {

/// q1 and sigma (running integral of q0, sigma(0) = 0) on a uniform grid.
struct PotentialPair {
  Grid grid;
  CVec q1;
  CVec sigma;

  static PotentialPair zero(int n);
  /// Throws GridMismatch on wrong lengths, NonFiniteInput on NaN/inf.
  void validate() const;
};

struct ShootingResult {
  cplx S_end, S_quasi_end, C_end, C_quasi_end;
  /// (S, S^[1], C, C^[1]) at the potential grid nodes, when requested.
  std::vector<std::array<cplx, 4>> trace;
};

/// Spectral-parameter derivatives d^a/dl^a of S and S^[1], a = 0..order.
struct Variational {
  int order = 0;
  CVec S;   // at x = pi
  CVec S1;  // at x = pi
  /// Per order, values at every node of the integration grid (when requested).
  std::vector<CVec> trace_S;
  std::vector<CVec> trace_S1;
};

/// Fixed-step RK4 integration of the quasi-derivative system on a grid
/// refined `refine` times relative to the potential grid.  Coefficients at
/// refined nodes and midpoints come from local cubic interpolation.
class Shooter {
 public:
  explicit Shooter(PotentialPair potentials, int refine = 10);

  const PotentialPair& potentials() const { return p_; }
  int refine() const { return refine_; }
  int fine_intervals() const { return nf_; }
  double fine_step() const { return kPi / nf_; }
  /// Coefficient samples at the integration nodes.
  cplx q1_fine(int i) const { return q1h_[2 * static_cast<size_t>(i)]; }
  cplx sigma_fine(int i) const { return sh_[2 * static_cast<size_t>(i)]; }

  ShootingResult integrate(cplx lambda, bool with_trace = false) const;
  Variational variational(cplx lambda, int order, bool with_trace = false) const;

  cplx delta(cplx lambda) const;
  /// Delta and its first `order` derivatives.
  CVec delta_derivs(cplx lambda, int order) const;
  /// M(l) = -C(pi, l) / Delta(l).
  cplx weyl(cplx lambda) const;

 private:
  PotentialPair p_;
  int refine_;
  int nf_;
  CVec q1h_;  // half-step samples, 2 nf + 1 values
  CVec sh_;
};

struct EigenSearchOptions {
  /// Indices |n| <= n_star are located together inside the low disc.
  int n_star = 1;
  /// Low disc; the center defaults to omega0.
  std::optional<cplx> disc_center;
  double disc_radius = 1.5;
  int contour_nodes = 128;
  double newton_tol = 1e-12;
  int max_iter = 50;
  /// Moment-based root estimates closer than this are one multiple root.
  double cluster_tol = 1e-3;
  /// Tail indices are refined independently; Serial is the reference path.
  Execution execution = Execution::Parallel;
};

/// Eigenvalues for 1 <= |n| <= n_max with multiplicities; residues left at 0.
SpectralDataSet find_eigenvalues(const Shooter& shooter, int n_max, cplx omega0,
                                 const EigenSearchOptions& opt = {});

/// Argument-principle count of zeros of Delta inside |l - center| = radius.
double winding_number(const Shooter& shooter, cplx center, double radius, int nodes = 128);

/// Fills in M_n: -C/Delta' for simple eigenvalues, contour Laurent
/// coefficients for multiple ones.
SpectralDataSet weyl_residues(const Shooter& shooter, const SpectralDataSet& eigenvalues);

/// Generalized weight numbers by quadrature of the variational traces.
std::map<int, cplx> weight_numbers(const Shooter& shooter, const SpectralDataSet& eigenvalues);

/// Contour radius used around a group: half the distance to the nearest other
/// eigenvalue, capped at 0.2.
double separation_radius(const SpectralDataSet& eigenvalues, const Group& g);

}  // namespace pencil
