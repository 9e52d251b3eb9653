#include "pencil/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pencil/special.hpp"

namespace pencil {

namespace {

constexpr double kDataEqualTol = 1e-13;
constexpr double kDegenerateTol = 1e-12;

bool differs(const SpectralEntry& a, const SpectralEntry& b) {
  return std::abs(a.lambda - b.lambda) > kDataEqualTol * (1.0 + std::abs(b.lambda)) ||
         std::abs(a.M - b.M) > kDataEqualTol * (1.0 + std::abs(b.M));
}

}  // namespace

PotentialPair RecoveredPotentials::as_potentials() const {
  PotentialPair p = PotentialPair::zero(grid.n);
  p.q1 = q1;
  p.sigma = q0_antideriv;
  if (background && background->kind() == BackgroundProblem::Kind::Numeric) {
    const Shooter& sh = background->shooter();
    const int stride = sh.fine_intervals() / grid.n;
    for (int k = 0; k <= grid.n; ++k) p.sigma[static_cast<size_t>(k)] += sh.sigma_fine(k * stride);
  }
  return p;
}

std::vector<int> differing_indices(const SpectralDataSet& data, const SpectralDataSet& model) {
  check_compatible(data, model);
  const int W = std::max(data.window(), model.window());
  std::set<int> active;
  for (int n = -W; n <= W; ++n) {
    if (n != 0 && differs(data.entry(n), model.entry(n))) active.insert(n);
  }
  bool grown = true;
  while (grown) {
    grown = false;
    for (int n : std::set<int>(active)) {
      for (const auto* set : {&data, &model}) {
        const Group g = set->group_of(n).first;
        for (int nu = 0; nu < g.multiplicity; ++nu) grown |= active.insert(g.member(nu)).second;
      }
    }
  }
  return {active.begin(), active.end()};
}

MainEquationContext::MainEquationContext(const SpectralDataSet& data,
                                         std::shared_ptr<const BackgroundProblem> background,
                                         const InverseOptions& options)
    : data_(data), bg_(std::move(background)), options_(options) {
  const SpectralDataSet& model = bg_->spectral_data();
  if (std::abs(data_.omega0() - model.omega0()) > 1e-10) {
    std::ostringstream os;
    os << "data omega0 " << data_.omega0() << " differs from background omega0 " << model.omega0();
    throw Error(ErrorKind::Omega0Mismatch, os.str());
  }
  std::vector<int> active;
  if (options_.active_window) {
    check_compatible(data_, model);
    for (int n = -*options_.active_window; n <= *options_.active_window; ++n) {
      if (n != 0) active.push_back(n);
    }
    // Close under groups.
    std::set<int> s(active.begin(), active.end());
    for (int n : active) {
      for (const SpectralDataSet* set : std::initializer_list<const SpectralDataSet*>{&data_, &model}) {
        const Group g = set->group_of(n).first;
        for (int nu = 0; nu < g.multiplicity; ++nu) s.insert(g.member(nu));
      }
    }
    active.assign(s.begin(), s.end());
  } else {
    active = differing_indices(data_, model);
  }

  std::vector<KernelPoint> points;
  for (int side = 0; side < 2; ++side) {
    const SpectralDataSet& set = side == 0 ? data_ : model;
    std::set<int> seen;
    for (int n : active) {
      const Group g = set.group_of(n).first;
      if (!seen.insert(g.start).second) continue;
      points.push_back({g.lambda, g.multiplicity - 1});
      for (int nu = 0; nu < g.multiplicity; ++nu) {
        unknowns_.push_back({side, g.member(nu), g.start, nu, g.multiplicity, g.lambda});
        point_of_.push_back(points.size() - 1);
      }
    }
  }
  kernels_ = std::make_unique<KernelTable>(bg_, options_.grid, std::move(points));
}

std::vector<int> MainEquationContext::active_indices() const {
  std::set<int> s;
  for (const auto& u : unknowns_) s.insert(u.index);
  return {s.begin(), s.end()};
}

cplx MainEquationContext::residue(const Unknown& u, int p) const {
  const SpectralDataSet& set = u.side == 0 ? data_ : bg_->spectral_data();
  return set.M(advance_index(u.group_start, p));
}

cplx MainEquationContext::B(int node, const Unknown& u) const {
  const size_t pt = point_of_[static_cast<size_t>(&u - unknowns_.data())];
  cplx sum = 0.0;
  for (int p = u.nu; p < u.multiplicity; ++p) {
    sum += residue(u, p) * kernels_->S(node, pt, p - u.nu) / factorial(p - u.nu);
  }
  return sum;
}

cplx MainEquationContext::B_x(int node, const Unknown& u) const {
  const size_t pt = point_of_[static_cast<size_t>(&u - unknowns_.data())];
  cplx sum = 0.0;
  for (int p = u.nu; p < u.multiplicity; ++p) {
    sum += residue(u, p) * kernels_->Sx(node, pt, p - u.nu) / factorial(p - u.nu);
  }
  return sum;
}

MainEquationSystem MainEquationContext::assemble(int node) const {
  const auto n = static_cast<Eigen::Index>(unknowns_.size());
  MainEquationSystem sys;
  sys.node = node;
  sys.x = options_.grid.x(node);
  sys.unknowns = unknowns_;
  sys.P.resize(n, n);
  sys.P_x.resize(n, n);
  sys.rhs.resize(n);
  sys.rhs_x.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Unknown& u = unknowns_[static_cast<size_t>(r)];
    const size_t pu = point_of_[static_cast<size_t>(r)];
    const double fu = factorial(u.nu);
    sys.rhs(r) = kernels_->S(node, pu, u.nu) / fu;
    sys.rhs_x(r) = kernels_->Sx(node, pu, u.nu) / fu;
    for (Eigen::Index c = 0; c < n; ++c) {
      const Unknown& w = unknowns_[static_cast<size_t>(c)];
      const size_t pw = point_of_[static_cast<size_t>(c)];
      cplx val = 0.0, val_x = 0.0;
      for (int p = w.nu; p < w.multiplicity; ++p) {
        const cplx coef = residue(w, p) / (fu * factorial(p - w.nu));
        val += coef * kernels_->D(node, pu, pw, u.nu, p - w.nu);
        val_x += coef * kernels_->Dx(node, pu, pw, u.nu, p - w.nu);
      }
      sys.P(r, c) = val;
      sys.P_x(r, c) = val_x;
    }
  }
  return sys;
}

MainEquationSystem assemble_system(const SpectralDataSet& data,
                                   std::shared_ptr<const BackgroundProblem> background, double x,
                                   const InverseOptions& options) {
  const Grid& g = options.grid;
  const long k = std::lround(x / g.step());
  if (k < 0 || k > g.n || std::abs(x - g.x(static_cast<int>(k))) > 1e-9) {
    std::ostringstream os;
    os << "x = " << x << " is not a node of the output grid";
    throw Error(ErrorKind::GridMismatch, os.str());
  }
  MainEquationContext ctx(data, std::move(background), options);
  return ctx.assemble(static_cast<int>(k));
}

MainSolution solve_main(const MainEquationSystem& system, double condition_limit) {
  const auto n = system.P.rows();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd Ps = system.P;
  Eigen::MatrixXcd Pxs = system.P_x;
  for (Eigen::Index c = 0; c < n; ++c) {
    if (system.unknowns[static_cast<size_t>(c)].side == 1) {
      Ps.col(c) *= -1.0;
      Pxs.col(c) *= -1.0;
    }
  }
  A -= Ps;
  MainSolution sol;
  if (n == 0) {
    sol.condition = 1.0;
    return sol;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const double rc = lu.rcond();
  sol.condition = rc > 0.0 ? 1.0 / rc : INFINITY;
  if (!(sol.condition <= condition_limit)) {
    std::ostringstream os;
    os << "main equation at x = " << system.x << " has condition estimate " << sol.condition;
    throw Error(ErrorKind::SingularSystem, os.str());
  }
  sol.v = lu.solve(system.rhs);
  sol.v_x = lu.solve(system.rhs_x + Pxs * sol.v);
  sol.residual = (A * sol.v - system.rhs).cwiseAbs().maxCoeff();
  return sol;
}

EpsilonPoint compute_epsilons(const MainEquationContext& ctx, int node, const MainSolution& sol) {
  EpsilonPoint e{};
  const auto& us = ctx.unknowns();
  for (size_t w = 0; w < us.size(); ++w) {
    const Unknown& u = us[w];
    const double sign = u.side == 0 ? 1.0 : -1.0;
    const auto wi = static_cast<Eigen::Index>(w);
    const cplx B = ctx.B(node, u);
    const cplx Bx = ctx.B_x(node, u);
    e.eps1 += sign * B * sol.v(wi);
    e.eps1_prime += sign * (Bx * sol.v(wi) + B * sol.v_x(wi));
    e.eps2 += sign * u.lambda * B * sol.v(wi);
    e.eps3 += sign * Bx * sol.v(wi);
    if (u.multiplicity > 1 && u.nu <= u.multiplicity - 2) {
      // Pair B_{k+nu+1} with v_{k+nu}: the next unknown of the same group.
      e.eps4 += sign * ctx.B(node, us[w + 1]) * sol.v(wi);
    }
  }
  return e;
}

void recover_theta(EpsilonFields& eps) {
  const size_t n = eps.eps1.size();
  eps.Theta.assign(n, 0.0);
  eps.Lambda.assign(n, 0.0);
  cplx prev = 1.0;
  for (size_t k = 0; k < n; ++k) {
    const cplx d = 1.0 + eps.eps1[k] * eps.eps1[k];
    if (std::abs(d) < kDegenerateTol) {
      std::ostringstream os;
      os << "1 + eps1^2 vanishes at node " << k;
      throw Error(ErrorKind::DegenerateEps1, os.str());
    }
    cplx t = 1.0 / std::sqrt(d);
    if (std::abs(t - prev) > std::abs(-t - prev)) t = -t;
    eps.Theta[k] = t;
    eps.Lambda[k] = eps.eps1[k] * t;
    prev = t;
  }
}

CVec recover_q1(const EpsilonFields& eps, const CVec& q1_background) {
  CVec q1(eps.eps1.size());
  for (size_t k = 0; k < q1.size(); ++k) {
    q1[k] = q1_background[k] + eps.eps1_prime[k] / (1.0 + eps.eps1[k] * eps.eps1[k]);
  }
  return q1;
}

CVec recover_q0_antiderivative(const EpsilonFields& eps, const CVec& q1, const CVec& q1_background,
                               double h) {
  const size_t n = q1.size();
  CVec b(n), g(n), out(n);
  for (size_t k = 0; k < n; ++k) {
    const cplx qt = q1_background[k];
    b[k] = 2.0 * (qt - q1[k]) * eps.eps1[k];
    // The q1_background' eps1 term is integrated by parts.
    g[k] = -2.0 * qt * eps.eps1_prime[k] + 2.0 * (qt - q1[k]) * eps.eps3[k] +
           b[k] * (eps.eps2[k] - 2.0 * qt * eps.eps1[k] + eps.eps4[k]) + 0.25 * b[k] * b[k];
  }
  const CVec G = cumulative_simpson(g, h);
  for (size_t k = 0; k < n; ++k) {
    out[k] = 2.0 * (eps.eps2[k] - eps.eps2[0]) + 2.0 * (eps.eps4[k] - eps.eps4[0]) +
             0.5 * (b[k] - b[0]) - 2.0 * (q1_background[k] * eps.eps1[k] - q1_background[0] * eps.eps1[0]) +
             G[k];
  }
  return out;
}

namespace {

RecoveredPotentials run_pipeline(const SpectralDataSet& data,
                                 std::shared_ptr<const BackgroundProblem> background,
                                 const InverseOptions& options) {
  MainEquationContext ctx(data, background, options);
  const Grid& grid = options.grid;
  const int nodes = grid.size();
  std::vector<EpsilonPoint> pts(static_cast<size_t>(nodes));
  std::vector<NodeDiagnostics> diag(static_cast<size_t>(nodes));
  for_each_index(nodes, options.execution, [&](int k) {
    const MainEquationSystem sys = ctx.assemble(k);
    const MainSolution sol = solve_main(sys, options.condition_limit);
    pts[static_cast<size_t>(k)] = compute_epsilons(ctx, k, sol);
    diag[static_cast<size_t>(k)] = {sys.x, sol.condition, sol.residual};
  });

  RecoveredPotentials out;
  out.grid = grid;
  out.background = background;
  out.nodes = std::move(diag);
  out.unknowns = ctx.unknowns();
  EpsilonFields& eps = out.eps;
  for (const auto& p : pts) {
    eps.eps1.push_back(p.eps1);
    eps.eps1_prime.push_back(p.eps1_prime);
    eps.eps2.push_back(p.eps2);
    eps.eps3.push_back(p.eps3);
    eps.eps4.push_back(p.eps4);
  }
  recover_theta(eps);
  CVec qt(static_cast<size_t>(nodes));
  for (int k = 0; k < nodes; ++k) qt[static_cast<size_t>(k)] = ctx.q1_background(k);
  out.q1 = recover_q1(eps, qt);
  eps.b.resize(out.q1.size());
  for (size_t k = 0; k < out.q1.size(); ++k) eps.b[k] = 2.0 * (qt[k] - out.q1[k]) * eps.eps1[k];
  out.q0_antideriv = recover_q0_antiderivative(eps, out.q1, qt, grid.step());
  return out;
}

}  // namespace

RecoveredPotentials run_algorithm1(const SpectralDataSet& data,
                                   std::shared_ptr<const BackgroundProblem> background,
                                   const InverseOptions& options) {
  return run_pipeline(data, std::move(background), options);
}

RecoveredPotentials run_algorithm1_serial(const SpectralDataSet& data,
                                          std::shared_ptr<const BackgroundProblem> background,
                                          InverseOptions options) {
  options.execution = Execution::Serial;
  return run_pipeline(data, std::move(background), options);
}

double scaled_operator_norm(const MainEquationContext& ctx, const SpectralDataSet& data,
                            const SpectralDataSet& model, int node) {
  const MainEquationSystem sys = ctx.assemble(node);
  const auto& us = ctx.unknowns();
  auto pos = [&](int side, int index) -> Eigen::Index {
    for (size_t i = 0; i < us.size(); ++i) {
      if (us[i].side == side && us[i].index == index) return static_cast<Eigen::Index>(i);
    }
    throw Error(ErrorKind::IndexMismatch, "index " + std::to_string(index) + " is not active");
  };
  const std::vector<int> active = ctx.active_indices();
  double best = 0.0;
  for (int n : active) {
    const double thn = std::abs(data.lambda(n) - model.lambda(n));
    const double chin = thn != 0.0 ? 1.0 / thn : 0.0;
    double row0 = 0.0, row1 = 0.0;
    for (int k : active) {
      const double thk = std::abs(data.lambda(k) - model.lambda(k));
      Eigen::Matrix2cd P;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) P(i, j) = sys.P(pos(i, n), pos(j, k));
      }
      Eigen::Matrix2cd L, R;
      L << chin, -chin, 0.0, 1.0;
      R << thk, 1.0, 0.0, -1.0;
      const Eigen::Matrix2cd H = (static_cast<double>(n) / k) * L * P * R;
      row0 += std::abs(H(0, 0)) + std::abs(H(0, 1));
      row1 += std::abs(H(1, 0)) + std::abs(H(1, 1));
    }
    best = std::max({best, row0, row1});
  }
  return best;
}

}  // namespace pencil
