#include "pencil/forward.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "pencil/parallel.hpp"
#include "pencil/special.hpp"

namespace pencil {

namespace {

constexpr int kMaxVariationalOrder = 8;
constexpr size_t kStateSize = 2 * (kMaxVariationalOrder + 1);
using State = std::array<cplx, kStateSize>;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string str(cplx z) {
  std::ostringstream os;
  os << z;
  return os.str();
}

}  // namespace

PotentialPair PotentialPair::zero(int n) {
  return PotentialPair{Grid{n}, CVec(static_cast<size_t>(n + 1), 0.0),
                       CVec(static_cast<size_t>(n + 1), 0.0)};
}

void PotentialPair::validate() const {
  if (grid.n < 1) throw Error(ErrorKind::GridMismatch, "grid needs at least one interval");
  const auto expected = static_cast<size_t>(grid.size());
  if (q1.size() != expected || sigma.size() != expected) {
    throw Error(ErrorKind::GridMismatch, "potential arrays do not match the grid size " +
                                             std::to_string(expected));
  }
  for (size_t k = 0; k < expected; ++k) {
    if (!finite(q1[k]) || !finite(sigma[k])) {
      throw Error(ErrorKind::NonFiniteInput, "potential value at node " + std::to_string(k));
    }
  }
}

Shooter::Shooter(PotentialPair potentials, int refine) : p_(std::move(potentials)), refine_(refine) {
  p_.validate();
  if (refine_ < 1) throw Error(ErrorKind::GridMismatch, "refinement factor must be positive");
  nf_ = p_.grid.n * refine_;
  const size_t nh = 2 * static_cast<size_t>(nf_) + 1;
  q1h_.resize(nh);
  sh_.resize(nh);
  // Local cubic Lagrange interpolation through four neighbouring nodes
  // (linear when the grid has a single interval).
  const int n = p_.grid.n;
  for (size_t j = 0; j < nh; ++j) {
    const double t = static_cast<double>(j) / (2.0 * refine_);
    if (n < 3) {
      const int k = std::min(static_cast<int>(std::floor(t)), n - 1);
      const double f = t - k;
      const auto uk = static_cast<size_t>(k);
      q1h_[j] = (1.0 - f) * p_.q1[uk] + f * p_.q1[uk + 1];
      sh_[j] = (1.0 - f) * p_.sigma[uk] + f * p_.sigma[uk + 1];
      continue;
    }
    const int k = std::clamp(static_cast<int>(std::floor(t)) - 1, 0, n - 3);
    std::array<double, 4> w{};
    for (int a = 0; a < 4; ++a) {
      double l = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (b != a) l *= (t - (k + b)) / static_cast<double>(a - b);
      }
      w[static_cast<size_t>(a)] = l;
    }
    cplx q = 0.0, s = 0.0;
    for (int a = 0; a < 4; ++a) {
      const auto idx = static_cast<size_t>(k + a);
      q += w[static_cast<size_t>(a)] * p_.q1[idx];
      s += w[static_cast<size_t>(a)] * p_.sigma[idx];
    }
    q1h_[j] = q;
    sh_[j] = s;
  }
}

namespace {

// Right-hand side of the variational system for orders 0..A at half-step j.
inline void rhs(const State& y, State& dy, int A, cplx lambda, cplx q, cplx s) {
  const cplx c0 = 2.0 * lambda * q - lambda * lambda;
  const cplx c1 = 2.0 * q - 2.0 * lambda;
  for (int a = 0; a <= A; ++a) {
    const cplx Y = y[2 * a];
    const cplx Y1 = y[2 * a + 1];
    dy[2 * a] = Y1 + s * Y;
    cplx v = -s * Y1 - s * s * Y + c0 * Y;
    if (a >= 1) v += static_cast<double>(a) * c1 * y[2 * (a - 1)];
    if (a >= 2) v -= static_cast<double>(a * (a - 1)) * y[2 * (a - 2)];
    dy[2 * a + 1] = v;
  }
}

template <class Observer>
State run_rk4(const CVec& q1h, const CVec& sh, int nf, cplx lambda, int A, State y,
              Observer&& observe) {
  const double h = kPi / nf;
  const int len = 2 * (A + 1);
  State k1{}, k2{}, k3{}, k4{}, tmp{};
  observe(0, y);
  for (int i = 0; i < nf; ++i) {
    const size_t j = 2 * static_cast<size_t>(i);
    rhs(y, k1, A, lambda, q1h[j], sh[j]);
    for (int c = 0; c < len; ++c) tmp[c] = y[c] + 0.5 * h * k1[c];
    rhs(tmp, k2, A, lambda, q1h[j + 1], sh[j + 1]);
    for (int c = 0; c < len; ++c) tmp[c] = y[c] + 0.5 * h * k2[c];
    rhs(tmp, k3, A, lambda, q1h[j + 1], sh[j + 1]);
    for (int c = 0; c < len; ++c) tmp[c] = y[c] + h * k3[c];
    rhs(tmp, k4, A, lambda, q1h[j + 2], sh[j + 2]);
    for (int c = 0; c < len; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    observe(i + 1, y);
  }
  return y;
}

}  // namespace

ShootingResult Shooter::integrate(cplx lambda, bool with_trace) const {
  if (!finite(lambda)) throw Error(ErrorKind::NonFiniteInput, "spectral parameter " + str(lambda));
  ShootingResult r;
  if (with_trace) r.trace.resize(static_cast<size_t>(p_.grid.size()));
  State s0{}, c0{};
  s0[1] = 1.0;
  c0[0] = 1.0;
  auto obs_s = [&](int i, const State& y) {
    if (with_trace && i % refine_ == 0) {
      auto& t = r.trace[static_cast<size_t>(i / refine_)];
      t[0] = y[0];
      t[1] = y[1];
    }
  };
  auto obs_c = [&](int i, const State& y) {
    if (with_trace && i % refine_ == 0) {
      auto& t = r.trace[static_cast<size_t>(i / refine_)];
      t[2] = y[0];
      t[3] = y[1];
    }
  };
  const State se = run_rk4(q1h_, sh_, nf_, lambda, 0, s0, obs_s);
  const State ce = run_rk4(q1h_, sh_, nf_, lambda, 0, c0, obs_c);
  r.S_end = se[0];
  r.S_quasi_end = se[1];
  r.C_end = ce[0];
  r.C_quasi_end = ce[1];
  return r;
}

Variational Shooter::variational(cplx lambda, int order, bool with_trace) const {
  if (!finite(lambda)) throw Error(ErrorKind::NonFiniteInput, "spectral parameter " + str(lambda));
  if (order < 0 || order > kMaxVariationalOrder) {
    throw Error(ErrorKind::OrderTooHigh, "variational order " + std::to_string(order));
  }
  Variational v;
  v.order = order;
  if (with_trace) {
    v.trace_S.assign(static_cast<size_t>(order + 1), CVec(static_cast<size_t>(nf_ + 1)));
    v.trace_S1 = v.trace_S;
  }
  State y{};
  y[1] = 1.0;
  const State e = run_rk4(q1h_, sh_, nf_, lambda, order, y, [&](int i, const State& st) {
    if (!with_trace) return;
    for (int a = 0; a <= order; ++a) {
      v.trace_S[static_cast<size_t>(a)][static_cast<size_t>(i)] = st[2 * a];
      v.trace_S1[static_cast<size_t>(a)][static_cast<size_t>(i)] = st[2 * a + 1];
    }
  });
  for (int a = 0; a <= order; ++a) {
    v.S.push_back(e[2 * a]);
    v.S1.push_back(e[2 * a + 1]);
  }
  return v;
}

cplx Shooter::delta(cplx lambda) const { return variational(lambda, 0).S[0]; }

CVec Shooter::delta_derivs(cplx lambda, int order) const { return variational(lambda, order).S; }

cplx Shooter::weyl(cplx lambda) const {
  const ShootingResult r = integrate(lambda);
  return -r.C_end / r.S_end;
}

double winding_number(const Shooter& shooter, cplx center, double radius, int nodes) {
  cplx sum = 0.0;
  for (int l = 0; l < nodes; ++l) {
    const cplx w = radius * std::exp(kI * (2.0 * kPi * l / nodes));
    const CVec d = shooter.delta_derivs(center + w, 1);
    sum += w * d[1] / d[0];
  }
  return (sum / static_cast<double>(nodes)).real();
}

namespace {

struct Root {
  cplx lambda;
  int multiplicity;
};

// Newton iteration on the (m-1)-th derivative of Delta.
bool newton(const Shooter& sh, cplx& z, int m, const EigenSearchOptions& opt) {
  for (int it = 0; it < opt.max_iter; ++it) {
    const CVec d = sh.delta_derivs(z, m);
    const cplx f = d[static_cast<size_t>(m - 1)];
    const cplx fp = d[static_cast<size_t>(m)];
    if (!finite(f) || !finite(fp) || fp == 0.0) return false;
    const cplx step = f / fp;
    z -= step;
    const double scale = 1.0 + std::abs(z);
    if (std::abs(step) < 1e-13 * scale) return true;
    if (std::abs(f) < opt.newton_tol && std::abs(step) < 1e-10 * scale) return true;
  }
  return false;
}

bool muller(const Shooter& sh, cplx& z, const EigenSearchOptions& opt) {
  cplx x0 = z - 0.1, x1 = z + 0.1, x2 = z;
  cplx f0 = sh.delta(x0), f1 = sh.delta(x1), f2 = sh.delta(x2);
  for (int it = 0; it < opt.max_iter; ++it) {
    const cplx h1 = x1 - x0, h2 = x2 - x1;
    const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * a * f2);
    const cplx den = std::abs(b + disc) > std::abs(b - disc) ? b + disc : b - disc;
    if (den == 0.0) return false;
    const cplx step = -2.0 * f2 / den;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 += step;
    f2 = sh.delta(x2);
    if (!finite(f2)) return false;
    if (std::abs(f2) < opt.newton_tol || std::abs(step) < 1e-14 * (1.0 + std::abs(x2))) {
      z = x2;
      return true;
    }
  }
  return false;
}

std::vector<cplx> moment_roots(const Shooter& sh, cplx c, double R, int count, int nodes) {
  std::vector<cplx> s(static_cast<size_t>(count + 1), 0.0);
  for (int l = 0; l < nodes; ++l) {
    const cplx w = std::exp(kI * (2.0 * kPi * l / nodes));
    const CVec d = sh.delta_derivs(c + R * w, 1);
    const cplx g = R * w * d[1] / d[0];
    cplx wp = 1.0;
    for (int p = 0; p <= count; ++p) {
      s[static_cast<size_t>(p)] += wp * g;
      wp *= w;
    }
  }
  for (auto& v : s) v /= static_cast<double>(nodes);
  // Newton identities: power sums -> elementary symmetric polynomials.
  std::vector<cplx> e(static_cast<size_t>(count + 1), 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= count; ++k) {
    cplx acc = 0.0;
    for (int i = 1; i <= k; ++i) {
      acc += ((i % 2 == 1) ? 1.0 : -1.0) * e[static_cast<size_t>(k - i)] * s[static_cast<size_t>(i)];
    }
    e[static_cast<size_t>(k)] = acc / static_cast<double>(k);
  }
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(count, count);
  for (int i = 1; i < count; ++i) comp(i, i - 1) = 1.0;
  // w^N + c_{N-1} w^{N-1} + ... + c_0, c_{N-k} = (-1)^k e_k.
  for (int k = 1; k <= count; ++k) {
    comp(0, k - 1) = -((k % 2 == 0) ? 1.0 : -1.0) * e[static_cast<size_t>(k)];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> roots;
  for (int i = 0; i < count; ++i) roots.push_back(c + R * es.eigenvalues()(i));
  return roots;
}

int checked_winding(const Shooter& sh, cplx center, double radius, int nodes, bool halve) {
  const double w1 = winding_number(sh, center, radius, nodes);
  const int n1 = static_cast<int>(std::lround(w1));
  bool ok = std::abs(w1 - n1) < 0.05;
  if (ok && halve) {
    const double w2 = winding_number(sh, center, 0.5 * radius, nodes);
    ok = std::abs(w2 - n1) < 0.05;
  }
  if (!ok) {
    std::ostringstream os;
    os << "winding count around " << center << " (radius " << radius << ") is not stable";
    throw Error(ErrorKind::WindingAmbiguous, os.str());
  }
  return n1;
}

}  // namespace

SpectralDataSet find_eigenvalues(const Shooter& shooter, int n_max, cplx omega0,
                                 const EigenSearchOptions& opt) {
  const int n_star = opt.n_star;
  const cplx c = opt.disc_center.value_or(omega0);
  const double R = opt.disc_radius;
  std::vector<SpectralEntry> raw;

  if (n_star > 0) {
    const int expected = 2 * n_star;
    const int count = checked_winding(shooter, c, R, opt.contour_nodes, false);
    if (count != expected) {
      throw Error(ErrorKind::RootCountMismatch, "low disc holds " + std::to_string(count) +
                                                    " roots, expected " + std::to_string(expected));
    }
    std::vector<cplx> est = moment_roots(shooter, c, R, count, opt.contour_nodes);
    std::vector<Root> clusters;
    for (cplx z : est) {
      auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Root& r) {
        return std::abs(r.lambda / static_cast<double>(r.multiplicity) - z) < opt.cluster_tol;
      });
      if (it == clusters.end()) {
        clusters.push_back({z, 1});
      } else {
        it->lambda += z;
        it->multiplicity += 1;
      }
    }
    for (auto& r : clusters) {
      r.lambda /= static_cast<double>(r.multiplicity);
      const cplx start = r.lambda;
      if (!newton(shooter, r.lambda, r.multiplicity, opt) || std::abs(r.lambda - start) > 0.1) {
        std::ostringstream os;
        os << "Newton refinement of the root near " << start << " stalled at " << r.lambda;
        throw Error(ErrorKind::RootNotConverged, os.str());
      }
    }
    for (auto& r : clusters) {
      double gap = R - std::abs(r.lambda - c);
      for (const auto& o : clusters) {
        if (&o != &r) gap = std::min(gap, std::abs(o.lambda - r.lambda));
      }
      const double rho = std::min(0.2, 0.5 * gap);
      const int w = checked_winding(shooter, r.lambda, rho, opt.contour_nodes, true);
      if (w != r.multiplicity) {
        std::ostringstream os;
        os << "root near " << r.lambda << " has winding " << w << " but " << r.multiplicity
           << " moment estimates";
        throw Error(ErrorKind::WindingAmbiguous, os.str());
      }
    }
    std::sort(clusters.begin(), clusters.end(), [](const Root& a, const Root& b) {
      if (std::abs(a.lambda.real() - b.lambda.real()) > 1e-12) return a.lambda.real() < b.lambda.real();
      return a.lambda.imag() < b.lambda.imag();
    });
    int n = -n_star;
    for (const auto& r : clusters) {
      for (int i = 0; i < r.multiplicity; ++i) {
        raw.push_back({n, r.lambda, 0.0});
        n = next_index(n);
      }
    }
  }

  std::vector<int> tail_idx;
  for (int k = n_star + 1; k <= n_max; ++k) {
    tail_idx.push_back(-k);
    tail_idx.push_back(k);
  }
  std::vector<cplx> found(tail_idx.size());
  for_each_index(static_cast<int>(tail_idx.size()), opt.execution, [&](int i) {
    const int n = tail_idx[static_cast<size_t>(i)];
    const cplx start = static_cast<double>(n) + omega0;
    cplx z = start;
    bool ok = newton(shooter, z, 1, opt) && std::abs(z - start) < 0.5;
    if (!ok) {
      z = start;
      ok = muller(shooter, z, opt) && std::abs(z - start) < 0.5;
    }
    if (!ok) {
      std::ostringstream os;
      os << "index " << n << ": no root near " << start << " (last iterate " << z << ")";
      throw Error(ErrorKind::RootNotConverged, os.str());
    }
    if (checked_winding(shooter, z, 0.2, opt.contour_nodes, false) != 1) {
      std::ostringstream os;
      os << "index " << n << ": root " << z << " is not simple";
      throw Error(ErrorKind::WindingAmbiguous, os.str());
    }
    found[static_cast<size_t>(i)] = z;
  });
  for (size_t i = 0; i < tail_idx.size(); ++i) raw.push_back({tail_idx[i], found[i], 0.0});
  return normalize_ordering(raw, std::make_shared<const FreeTail>(omega0), omega0);
}

double separation_radius(const SpectralDataSet& eigenvalues, const Group& g) {
  double gap = INFINITY;
  for (const Group& o : eigenvalues.groups()) {
    if (o.start != g.start) gap = std::min(gap, std::abs(o.lambda - g.lambda));
  }
  const int W = eigenvalues.window();
  for (int n : {W + 1, W + 2, -W - 1, -W - 2}) {
    gap = std::min(gap, std::abs(eigenvalues.lambda(n) - g.lambda));
  }
  return std::min(0.2, 0.5 * gap);
}

SpectralDataSet weyl_residues(const Shooter& shooter, const SpectralDataSet& eigenvalues) {
  const auto& groups = eigenvalues.groups();
  std::vector<std::vector<cplx>> coeffs(groups.size());
  for_each_index(static_cast<int>(groups.size()), Execution::Parallel, [&](int gi) {
    const Group& g = groups[static_cast<size_t>(gi)];
    auto& out = coeffs[static_cast<size_t>(gi)];
    if (g.multiplicity == 1) {
      const ShootingResult r = shooter.integrate(g.lambda);
      const cplx dp = shooter.delta_derivs(g.lambda, 1)[1];
      out.push_back(-r.C_end / dp);
      return;
    }
    const double rho = separation_radius(eigenvalues, g);
    if (rho < 1e-8) {
      std::ostringstream os;
      os << "group at " << g.lambda << " is too close to its neighbours";
      throw Error(ErrorKind::PoleTooClose, os.str());
    }
    const int K = 256;
    out.assign(static_cast<size_t>(g.multiplicity), 0.0);
    for (int l = 0; l < K; ++l) {
      const cplx w = rho * std::exp(kI * (2.0 * kPi * l / K));
      const cplx Mw = shooter.weyl(g.lambda + w);
      cplx wp = w;
      for (int nu = 0; nu < g.multiplicity; ++nu) {
        out[static_cast<size_t>(nu)] += wp * Mw;
        wp *= w;
      }
    }
    for (auto& v : out) v /= static_cast<double>(K);
  });
  std::map<int, cplx> M;
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    for (int nu = 0; nu < groups[gi].multiplicity; ++nu) {
      M[groups[gi].member(nu)] = coeffs[gi][static_cast<size_t>(nu)];
    }
  }
  return eigenvalues.with_residues(M);
}

std::map<int, cplx> weight_numbers(const Shooter& shooter, const SpectralDataSet& eigenvalues) {
  const auto& groups = eigenvalues.groups();
  std::vector<std::vector<cplx>> alpha(groups.size());
  const int nf = shooter.fine_intervals();
  const double h = shooter.fine_step();
  for_each_index(static_cast<int>(groups.size()), Execution::Parallel, [&](int gi) {
    const Group& g = groups[static_cast<size_t>(gi)];
    const int m = g.multiplicity;
    const Variational v = shooter.variational(g.lambda, m - 1, true);
    auto Sn = [&](int nu, int i) -> cplx {
      if (nu < 0) return 0.0;
      return v.trace_S[static_cast<size_t>(nu)][static_cast<size_t>(i)] / factorial(nu);
    };
    // S_{m-2} enters with a plus sign (matches the residue relation).
    for (int nu = 0; nu < m; ++nu) {
      CVec f(static_cast<size_t>(nf + 1));
      for (int i = 0; i <= nf; ++i) {
        f[static_cast<size_t>(i)] =
            (2.0 * (g.lambda - shooter.q1_fine(i)) * Sn(m - 1, i) + Sn(m - 2, i)) * Sn(nu, i) +
            Sn(m - 1, i) * Sn(nu - 1, i);
      }
      alpha[static_cast<size_t>(gi)].push_back(simpson(f, h));
    }
  });
  std::map<int, cplx> out;
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    for (int nu = 0; nu < groups[gi].multiplicity; ++nu) {
      out[groups[gi].member(nu)] = alpha[gi][static_cast<size_t>(nu)];
    }
  }
  return out;
}

}  // namespace pencil
