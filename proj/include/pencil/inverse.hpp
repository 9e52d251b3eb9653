#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "pencil/model_problem.hpp"
#include "pencil/parallel.hpp"

namespace pencil {

/// One unknown v_{n,i} of the main equation.
struct Unknown {
  int side = 0;  // 0: given data, 1: background data
  int index = 0;
  int group_start = 0;
  int nu = 0;
  int multiplicity = 1;
  cplx lambda;
};

struct InverseOptions {
  Grid grid{200};
  /// Forces every |n| <= value into the system instead of only the indices
  /// where data and background differ.
  std::optional<int> active_window;
  double condition_limit = 1e10;
  Execution execution = Execution::Parallel;
};

struct MainEquationSystem {
  int node = 0;
  double x = 0.0;
  std::vector<Unknown> unknowns;
  Eigen::MatrixXcd P;    // raw kernel entries P_{n,i;k,j}
  Eigen::MatrixXcd P_x;  // their x-derivatives
  Eigen::VectorXcd rhs;
  Eigen::VectorXcd rhs_x;
};

struct MainSolution {
  Eigen::VectorXcd v;
  Eigen::VectorXcd v_x;
  double condition = 0.0;
  double residual = 0.0;
};

struct EpsilonFields {
  CVec eps1, eps1_prime, eps2, eps3, eps4;
  CVec Theta, Lambda;
  CVec b;
};

struct NodeDiagnostics {
  double x = 0.0;
  double condition = 0.0;
  double residual = 0.0;
};

struct RecoveredPotentials {
  Grid grid;
  CVec q1;
  /// Running integral of q0 - q0_background, zero at x = 0.
  CVec q0_antideriv;
  std::shared_ptr<const BackgroundProblem> background;
  EpsilonFields eps;
  std::vector<NodeDiagnostics> nodes;
  std::vector<Unknown> unknowns;

  /// q1 and sigma = sigma_background + q0_antideriv on the output grid.
  PotentialPair as_potentials() const;
};

/// Everything about the main equation that does not depend on x: the unknown
/// ordering and the kernel table.
class MainEquationContext {
 public:
  MainEquationContext(const SpectralDataSet& data, std::shared_ptr<const BackgroundProblem> background,
                      const InverseOptions& options = {});

  const std::vector<Unknown>& unknowns() const { return unknowns_; }
  const Grid& grid() const { return options_.grid; }
  const InverseOptions& options() const { return options_; }
  std::vector<int> active_indices() const;

  MainEquationSystem assemble(int node) const;
  /// Residue weight M_{k+p, j} for the unknown's group, p-th member.
  cplx residue(const Unknown& u, int p) const;
  /// B_{k+nu, j} and its x-derivative at a node.
  cplx B(int node, const Unknown& u) const;
  cplx B_x(int node, const Unknown& u) const;
  cplx q1_background(int node) const { return kernels_->q1(node); }

 private:
  SpectralDataSet data_;
  std::shared_ptr<const BackgroundProblem> bg_;
  InverseOptions options_;
  std::vector<Unknown> unknowns_;
  std::vector<size_t> point_of_;
  std::unique_ptr<KernelTable> kernels_;
};

/// Indices where data and background spectral data differ, closed under
/// multiplicity groups of both.
std::vector<int> differing_indices(const SpectralDataSet& data, const SpectralDataSet& model);

MainEquationSystem assemble_system(const SpectralDataSet& data,
                                   std::shared_ptr<const BackgroundProblem> background, double x,
                                   const InverseOptions& options = {});

/// Solves (I - P)v = rhs with P_{uw} carrying the sign (-1)^j of column w,
/// then the differentiated system for v_x with the same factorization.
MainSolution solve_main(const MainEquationSystem& system, double condition_limit = 1e10);

struct EpsilonPoint {
  cplx eps1, eps1_prime, eps2, eps3, eps4;
};

EpsilonPoint compute_epsilons(const MainEquationContext& ctx, int node, const MainSolution& sol);

/// Theta with Theta(0) = 1 and node-to-node continuity; Lambda = eps1 Theta.
void recover_theta(EpsilonFields& eps);

CVec recover_q1(const EpsilonFields& eps, const CVec& q1_background);

CVec recover_q0_antiderivative(const EpsilonFields& eps, const CVec& q1, const CVec& q1_background,
                               double h);

RecoveredPotentials run_algorithm1(const SpectralDataSet& data,
                                   std::shared_ptr<const BackgroundProblem> background,
                                   const InverseOptions& options = {});

/// Reference implementation: same pipeline, single-threaded.
RecoveredPotentials run_algorithm1_serial(const SpectralDataSet& data,
                                          std::shared_ptr<const BackgroundProblem> background,
                                          InverseOptions options = {});

/// sup-norm (max row sum) of the scaled operator H over the active window.
double scaled_operator_norm(const MainEquationContext& ctx, const SpectralDataSet& data,
                            const SpectralDataSet& model, int node);

}  // namespace pencil
