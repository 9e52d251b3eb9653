#include "pencil/model_problem.hpp"

#include <cmath>
#include <sstream>

#include "pencil/special.hpp"

namespace pencil {

namespace {

constexpr double kCloseDistance = 0.5;

void check_mu_order(int p) {
  if (p < 0 || p > kMaxMuOrder) {
    throw Error(ErrorKind::OrderTooHigh, "mu-derivative order " + std::to_string(p));
  }
}

}  // namespace

std::shared_ptr<const BackgroundProblem> BackgroundProblem::zero() {
  static const std::shared_ptr<const BackgroundProblem> bg = [] {
    auto* b = new BackgroundProblem();
    b->kind_ = Kind::ZeroPotential;
    b->spectral_ = SpectralDataSet();
    return std::shared_ptr<const BackgroundProblem>(b);
  }();
  return bg;
}

std::shared_ptr<const BackgroundProblem> BackgroundProblem::numeric(PotentialPair potentials,
                                                                    SpectralDataSet spectral,
                                                                    int refine) {
  auto* b = new BackgroundProblem();
  b->kind_ = Kind::Numeric;
  b->spectral_ = std::move(spectral);
  b->shooter_.emplace(std::move(potentials), refine);
  return std::shared_ptr<const BackgroundProblem>(b);
}

std::shared_ptr<const BackgroundProblem> BackgroundProblem::numeric_from_potentials(
    PotentialPair potentials, int n_max, cplx omega0, const EigenSearchOptions& search,
    int refine) {
  const Shooter sh(potentials, refine);
  SpectralDataSet eig = find_eigenvalues(sh, n_max, omega0, search);
  SpectralDataSet data = weyl_residues(sh, eig);
  return numeric(std::move(potentials), std::move(data), refine);
}

const Shooter& BackgroundProblem::shooter() const {
  if (!shooter_) throw Error(ErrorKind::GridMismatch, "the zero background has no integration grid");
  return *shooter_;
}

const Grid& BackgroundProblem::grid() const { return shooter().potentials().grid; }

cplx BackgroundProblem::q1_at(const Grid& grid, int k) const {
  if (kind_ == Kind::ZeroPotential) return 0.0;
  const Grid& own = this->grid();
  if (own.n % grid.n != 0) throw Error(ErrorKind::GridMismatch, "output grid is not a subgrid");
  return shooter().potentials().q1[static_cast<size_t>(k * (own.n / grid.n))];
}

int BackgroundProblem::node_of(double x) const {
  const Grid& g = grid();
  const double t = x / g.step();
  const long k = std::lround(t);
  if (k < 0 || k > g.n || std::abs(t - static_cast<double>(k)) > 1e-9) {
    std::ostringstream os;
    os << "x = " << x << " is not a node of the background grid";
    throw Error(ErrorKind::GridMismatch, os.str());
  }
  return static_cast<int>(k);
}

cplx BackgroundProblem::S_model(double x, cplx lambda) const {
  if (kind_ == Kind::ZeroPotential) return zero_model::S(x, lambda);
  const int k = node_of(x);
  const Variational v = shooter().variational(lambda, 0, true);
  return v.trace_S[0][static_cast<size_t>(k * shooter().refine())];
}

cplx BackgroundProblem::S_model_x(double x, cplx lambda) const {
  if (kind_ == Kind::ZeroPotential) return zero_model::Sx(x, lambda);
  const int k = node_of(x);
  const Variational v = shooter().variational(lambda, 0, true);
  const auto i = static_cast<size_t>(k * shooter().refine());
  return v.trace_S1[0][i] + shooter().potentials().sigma[static_cast<size_t>(k)] * v.trace_S[0][i];
}

cplx BackgroundProblem::D_model(double x, cplx lambda, cplx mu) const {
  return D_model_mu_deriv(x, lambda, mu, 0);
}

cplx BackgroundProblem::D_model_mu_deriv(double x, cplx lambda, cplx mu, int p) const {
  check_mu_order(p);
  if (kind_ == Kind::ZeroPotential) return zero_model::D(x, lambda, mu, 0, p);
  const int k = node_of(x);
  auto self = std::shared_ptr<const BackgroundProblem>(std::shared_ptr<const BackgroundProblem>{}, this);
  KernelTable t(self, grid(), {{lambda, 0}, {mu, p}});
  return t.D(k, 0, 1, 0, p);
}

cplx BackgroundProblem::D_model_x_deriv(double x, cplx lambda, cplx mu) const {
  if (kind_ == Kind::ZeroPotential) return zero_model::Dx(x, lambda, mu);
  const int k = node_of(x);
  auto self = std::shared_ptr<const BackgroundProblem>(std::shared_ptr<const BackgroundProblem>{}, this);
  KernelTable t(self, grid(), {{lambda, 0}, {mu, 0}});
  return t.Dx(k, 0, 1, 0, 0);
}

SpectralDataSet BackgroundProblem::model_spectral_data(int N) const {
  if (kind_ != Kind::ZeroPotential) {
    throw Error(ErrorKind::IndexMismatch, "closed-form spectral data exist only for the zero background");
  }
  return zero_spectral_data(N);
}

KernelTable::KernelTable(std::shared_ptr<const BackgroundProblem> background, Grid grid,
                         std::vector<KernelPoint> points)
    : bg_(std::move(background)), grid_(grid), points_(std::move(points)) {
  for (const auto& pt : points_) {
    if (pt.order < 0 || pt.order > zero_model::kMaxKernelOrder / 2) {
      throw Error(ErrorKind::OrderTooHigh, "kernel point order " + std::to_string(pt.order));
    }
  }
  if (bg_->kind() == BackgroundProblem::Kind::ZeroPotential) return;

  const Shooter& sh = bg_->shooter();
  const int nf = sh.fine_intervals();
  if (nf % grid_.n != 0) {
    throw Error(ErrorKind::GridMismatch, "output grid with " + std::to_string(grid_.n) +
                                             " intervals is not a subgrid of the integration grid");
  }
  stride_ = nf / grid_.n;
  S_.resize(points_.size());
  Sx_.resize(points_.size());
  for (size_t p = 0; p < points_.size(); ++p) {
    const Variational v = sh.variational(points_[p].lambda, points_[p].order, true);
    S_[p] = v.trace_S;
    Sx_[p].resize(v.trace_S.size());
    for (size_t a = 0; a < v.trace_S.size(); ++a) {
      CVec& out = Sx_[p][a];
      out.resize(static_cast<size_t>(nf + 1));
      for (int i = 0; i <= nf; ++i) {
        const auto ui = static_cast<size_t>(i);
        out[ui] = v.trace_S1[a][ui] + sh.sigma_fine(i) * v.trace_S[a][ui];
      }
    }
  }
  const double h = sh.fine_step();
  for (size_t p = 0; p < points_.size(); ++p) {
    for (size_t r = 0; r < points_.size(); ++r) {
      const cplx l = points_[p].lambda;
      const cplx m = points_[r].lambda;
      if (std::abs(l - m) >= kCloseDistance) continue;
      for (int a = 0; a <= points_[p].order; ++a) {
        for (int b = 0; b <= points_[r].order; ++b) {
          CVec f(static_cast<size_t>(nf + 1));
          for (int i = 0; i <= nf; ++i) {
            const auto ui = static_cast<size_t>(i);
            cplx v = (l + m - 2.0 * sh.q1_fine(i)) * S_[p][static_cast<size_t>(a)][ui] *
                     S_[r][static_cast<size_t>(b)][ui];
            if (a > 0) v += static_cast<double>(a) * S_[p][static_cast<size_t>(a - 1)][ui] * S_[r][static_cast<size_t>(b)][ui];
            if (b > 0) v += static_cast<double>(b) * S_[p][static_cast<size_t>(a)][ui] * S_[r][static_cast<size_t>(b - 1)][ui];
            f[ui] = v;
          }
          close_[{p, r, static_cast<size_t>(a), static_cast<size_t>(b)}] = cumulative_simpson(f, h);
        }
      }
    }
  }
}

cplx KernelTable::q1(int k) const {
  if (bg_->kind() == BackgroundProblem::Kind::ZeroPotential) return 0.0;
  return bg_->shooter().q1_fine(k * stride_);
}

cplx KernelTable::S(int k, size_t p, int a) const {
  if (bg_->kind() == BackgroundProblem::Kind::ZeroPotential) {
    return zero_model::S(grid_.x(k), points_[p].lambda, a);
  }
  return S_[p][static_cast<size_t>(a)][static_cast<size_t>(k * stride_)];
}

cplx KernelTable::Sx(int k, size_t p, int a) const {
  if (bg_->kind() == BackgroundProblem::Kind::ZeroPotential) {
    return zero_model::Sx(grid_.x(k), points_[p].lambda, a);
  }
  return Sx_[p][static_cast<size_t>(a)][static_cast<size_t>(k * stride_)];
}

cplx KernelTable::D(int k, size_t p, size_t r, int a, int b) const {
  if (bg_->kind() == BackgroundProblem::Kind::ZeroPotential) {
    return zero_model::D(grid_.x(k), points_[p].lambda, points_[r].lambda, a, b);
  }
  return D_numeric(k, p, r, a, b);
}

cplx KernelTable::D_numeric(int k, size_t p, size_t r, int a, int b) const {
  if (a > points_[p].order || b > points_[r].order) {
    throw Error(ErrorKind::OrderTooHigh, "kernel derivative beyond the tabulated order");
  }
  const auto i = static_cast<size_t>(k * stride_);
  auto it = close_.find({p, r, static_cast<size_t>(a), static_cast<size_t>(b)});
  if (it != close_.end()) return it->second[i];
  const cplx inv = 1.0 / (points_[p].lambda - points_[r].lambda);
  std::vector<CVec> d(static_cast<size_t>(a + 1), CVec(static_cast<size_t>(b + 1)));
  for (int u = 0; u <= a; ++u) {
    for (int w = 0; w <= b; ++w) {
      cplx v = S_[p][static_cast<size_t>(u)][i] * Sx_[r][static_cast<size_t>(w)][i] -
               Sx_[p][static_cast<size_t>(u)][i] * S_[r][static_cast<size_t>(w)][i];
      if (u > 0) v -= static_cast<double>(u) * d[static_cast<size_t>(u - 1)][static_cast<size_t>(w)];
      if (w > 0) v += static_cast<double>(w) * d[static_cast<size_t>(u)][static_cast<size_t>(w - 1)];
      d[static_cast<size_t>(u)][static_cast<size_t>(w)] = v * inv;
    }
  }
  return d[static_cast<size_t>(a)][static_cast<size_t>(b)];
}

cplx KernelTable::Dx(int k, size_t p, size_t r, int a, int b) const {
  const cplx l = points_[p].lambda;
  const cplx m = points_[r].lambda;
  cplx v = (l + m - 2.0 * q1(k)) * S(k, p, a) * S(k, r, b);
  if (a > 0) v += static_cast<double>(a) * S(k, p, a - 1) * S(k, r, b);
  if (b > 0) v += static_cast<double>(b) * S(k, p, a) * S(k, r, b - 1);
  return v;
}

}  // namespace pencil
