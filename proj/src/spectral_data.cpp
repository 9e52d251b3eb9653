#include "pencil/spectral_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pencil/special.hpp"

namespace pencil {

int next_index(int n) { return n == -1 ? 1 : n + 1; }

int prev_index(int n) { return n == 1 ? -1 : n - 1; }

int advance_index(int n, int k) {
  for (int i = 0; i < k; ++i) n = next_index(n);
  return n;
}

std::string FreeTail::name() const {
  std::ostringstream os;
  os << "free(omega0=" << omega0_.real() << (omega0_.imag() < 0 ? "" : "+") << omega0_.imag()
     << "i)";
  return os.str();
}

std::shared_ptr<const SpectralTail> zero_tail() {
  static const auto tail = std::make_shared<const FreeTail>(0.0);
  return tail;
}

SpectralDataSet::SpectralDataSet() : tail_(zero_tail()), omega0_(0.0) {}

size_t SpectralDataSet::position(int n) const {
  return static_cast<size_t>(n < 0 ? n + window_ : n + window_ - 1);
}

SpectralEntry SpectralDataSet::entry(int n) const {
  if (n == 0) throw Error(ErrorKind::IndexMismatch, "index 0 is not a spectral index");
  if (std::abs(n) <= window_) return entries_[position(n)];
  return {n, tail_->lambda(n), tail_->M(n)};
}

std::pair<Group, int> SpectralDataSet::group_of(int n) const {
  if (n == 0) throw Error(ErrorKind::IndexMismatch, "index 0 is not a spectral index");
  if (std::abs(n) > window_) return {Group{n, 1, tail_->lambda(n)}, 0};
  const Group& g = groups_[group_of_entry_[position(n)]];
  int nu = 0;
  for (int k = g.start; k != n; k = next_index(k)) ++nu;
  return {g, nu};
}

bool SpectralDataSet::all_simple() const {
  return std::all_of(groups_.begin(), groups_.end(),
                     [](const Group& g) { return g.multiplicity == 1; });
}

SpectralDataSet SpectralDataSet::with_residues(const std::map<int, cplx>& M) const {
  SpectralDataSet out = *this;
  for (auto& e : out.entries_) {
    auto it = M.find(e.n);
    if (it != M.end()) e.M = it->second;
  }
  return out;
}

namespace {

struct Cluster {
  cplx lambda;
  std::vector<SpectralEntry> members;
};

// Clusters one sign of the window, scanning outward from |n| = 1.
std::vector<Cluster> cluster_side(const std::vector<SpectralEntry>& side) {
  std::vector<Cluster> clusters;
  for (const auto& e : side) {
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) {
      return std::abs(c.lambda - e.lambda) <= kGroupingTolerance;
    });
    if (it == clusters.end()) {
      clusters.push_back({e.lambda, {e}});
    } else {
      it->members.push_back(e);
    }
  }
  for (auto& c : clusters) {
    std::sort(c.members.begin(), c.members.end(),
              [](const SpectralEntry& a, const SpectralEntry& b) { return a.n < b.n; });
  }
  return clusters;
}

}  // namespace

SpectralDataSet normalize_ordering(std::vector<SpectralEntry> raw,
                                   std::shared_ptr<const SpectralTail> tail,
                                   std::optional<cplx> omega0) {
  if (!tail) tail = zero_tail();
  int window = 0;
  std::map<int, SpectralEntry> by_index;
  for (const auto& e : raw) {
    if (e.n == 0) throw Error(ErrorKind::IndexMismatch, "index 0 is not a spectral index");
    if (!std::isfinite(e.lambda.real()) || !std::isfinite(e.lambda.imag()) ||
        !std::isfinite(e.M.real()) || !std::isfinite(e.M.imag())) {
      throw Error(ErrorKind::NonFiniteInput, "entry " + std::to_string(e.n));
    }
    if (!by_index.emplace(e.n, e).second) {
      throw Error(ErrorKind::DuplicateIndex, "index " + std::to_string(e.n) + " given twice");
    }
    window = std::max(window, std::abs(e.n));
  }
  for (int n = -window; n <= window; ++n) {
    if (n != 0 && !by_index.count(n)) by_index.emplace(n, SpectralEntry{n, tail->lambda(n), tail->M(n)});
  }

  std::vector<SpectralEntry> neg, pos;
  for (int k = 1; k <= window; ++k) {
    neg.push_back(by_index.at(-k));
    pos.push_back(by_index.at(k));
  }
  auto neg_clusters = cluster_side(neg);
  auto pos_clusters = cluster_side(pos);

  // Equal eigenvalues across the sign boundary are admitted only as one group
  // straddling -1, 1.
  bool straddle = false;
  for (size_t a = 0; a < neg_clusters.size(); ++a) {
    for (size_t b = 0; b < pos_clusters.size(); ++b) {
      if (std::abs(neg_clusters[a].lambda - pos_clusters[b].lambda) > kGroupingTolerance) continue;
      if (a == 0 && b == 0) {
        straddle = true;
      } else {
        std::ostringstream os;
        os << "eigenvalue " << neg_clusters[a].lambda << " appears at indices of both signs";
        throw Error(ErrorKind::SignConflict, os.str());
      }
    }
  }

  SpectralDataSet out;
  out.window_ = window;
  out.tail_ = tail;
  out.omega0_ = omega0.value_or(tail->omega0());
  out.entries_.resize(static_cast<size_t>(2 * window));
  out.group_of_entry_.resize(out.entries_.size());

  // Negative side: clusters in order of first appearance occupy -1, -2, ...
  std::vector<std::vector<SpectralEntry>> neg_blocks;  // outermost first after reversal
  {
    int next_free = -1;
    std::vector<std::pair<int, Cluster*>> placed;
    for (auto& c : neg_clusters) {
      const int m = static_cast<int>(c.members.size());
      const int start = next_free - m + 1;
      placed.emplace_back(start, &c);
      next_free = start - 1;
    }
    std::reverse(placed.begin(), placed.end());
    for (auto& [start, c] : placed) {
      int n = start;
      for (auto& e : c->members) {
        out.entries_[out.position(n)] = {n, c->members.front().lambda, e.M};
        ++n;
      }
      out.groups_.push_back(Group{start, static_cast<int>(c->members.size()), c->members.front().lambda});
    }
  }
  {
    int next_free = 1;
    bool first = true;
    for (auto& c : pos_clusters) {
      const int m = static_cast<int>(c.members.size());
      const cplx lam = (first && straddle) ? out.groups_.back().lambda : c.members.front().lambda;
      for (int i = 0; i < m; ++i) {
        const int n = next_free + i;
        out.entries_[out.position(n)] = {n, lam, c.members[static_cast<size_t>(i)].M};
      }
      if (first && straddle) {
        out.groups_.back().multiplicity += m;
      } else {
        out.groups_.push_back(Group{next_free, m, lam});
      }
      next_free += m;
      first = false;
    }
  }
  for (size_t g = 0; g < out.groups_.size(); ++g) {
    int n = out.groups_[g].start;
    for (int nu = 0; nu < out.groups_[g].multiplicity; ++nu, n = next_index(n)) {
      out.group_of_entry_[out.position(n)] = g;
    }
  }
  return out;
}

cplx estimate_omega0(const std::vector<SpectralEntry>& entries) {
  std::vector<SpectralEntry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(), [](const SpectralEntry& a, const SpectralEntry& b) {
    return std::abs(a.n) > std::abs(b.n);
  });
  const size_t count = std::min<size_t>(5, sorted.size());
  if (count == 0) return 0.0;
  cplx sum = 0.0;
  for (size_t i = 0; i < count; ++i) sum += sorted[i].lambda - static_cast<double>(sorted[i].n);
  return sum / static_cast<double>(count);
}

SpectralDataSet zero_spectral_data(int N) {
  std::vector<SpectralEntry> raw;
  for (int n = -N; n <= N; ++n) {
    if (n != 0) raw.push_back({n, static_cast<double>(n), -n / kPi});
  }
  return normalize_ordering(raw, zero_tail(), cplx(0.0));
}

void check_compatible(const SpectralDataSet& data, const SpectralDataSet& model) {
  const int W = std::max(data.window(), model.window());
  for (int k = W + 1; k <= W + 8; ++k) {
    for (int n : {-k, k}) {
      const auto a = data.entry(n);
      const auto b = model.entry(n);
      const double scale = 1.0 + std::abs(b.lambda) + std::abs(b.M);
      if (std::abs(a.lambda - b.lambda) > 1e-12 * scale || std::abs(a.M - b.M) > 1e-12 * scale) {
        throw Error(ErrorKind::IndexMismatch,
                    "tails differ at index " + std::to_string(n) + " (" + data.tail()->name() +
                        " vs " + model.tail()->name() + ")");
      }
    }
  }
}

Diagnostics compute_diagnostics(const SpectralDataSet& data, const SpectralDataSet& model, int N) {
  check_compatible(data, model);
  const int W = std::max(data.window(), model.window());
  Diagnostics d;
  for (int n = -W; n <= W; ++n) {
    if (n == 0) continue;
    const double th = std::abs(data.lambda(n) - model.lambda(n));
    d.theta[n] = th;
    d.chi[n] = th != 0.0 ? 1.0 / th : 0.0;
    const auto [g, nu] = data.group_of(n);
    const auto [gm, num] = model.group_of(n);
    if (g.start == gm.start && g.multiplicity == gm.multiplicity) {
      const int k = g.start;
      double s = 0.0;
      for (int p = nu; p < g.multiplicity; ++p) {
        const int idx = advance_index(k, p);
        s += std::abs(data.M(idx) - model.M(idx));
      }
      d.xi[n] = std::abs(data.lambda(k) - model.lambda(k)) + s / std::abs(k);
    } else {
      d.xi[n] = 1.0;
    }
  }
  const int top = std::max(N, W);
  for (int level = top; level >= 0; --level) {
    double sum = 0.0;
    for (const auto& [n, x] : d.xi) {
      if (std::abs(n) > level) sum += (n * x) * (n * x);
    }
    d.OmegaN[level] = std::sqrt(sum);
  }
  d.Omega = d.OmegaN.at(0);
  return d;
}

double eta(int k) {
  const int L = 20000 + 4 * std::abs(k);
  double sum = 0.0;
  for (int l = -L; l <= L; ++l) {
    if (l == 0) continue;
    const double t = static_cast<double>(l) * (std::abs(l - k) + 1);
    sum += 1.0 / (t * t);
  }
  return std::sqrt(sum);
}

bool SplittingReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.pass; });
}

std::vector<ConditionCheck> SplittingReport::violations() const {
  std::vector<ConditionCheck> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
               [](const ConditionCheck& c) { return !c.pass; });
  return out;
}

SplittingReport validate_splitting_conditions(const SpectralDataSet& data,
                                              const SpectralDataSet& model, int n_star,
                                              double delta, double slack) {
  SplittingReport rep;
  auto add = [&](std::string name, int index, int s, double measured, double bound) {
    rep.checks.push_back({std::move(name), index, s, measured, slack * bound, measured <= slack * bound});
  };

  {
    const Diagnostics diag = compute_diagnostics(data, model, n_star);
    add("tail", 0, 0, diag.OmegaN.at(n_star), delta);
  }

  {
    double min_gap = INFINITY;
    int at = 0;
    const auto& e = data.entries();
    for (size_t a = 0; a < e.size(); ++a) {
      for (size_t b = a + 1; b < e.size(); ++b) {
        const double gap = std::abs(e[a].lambda - e[b].lambda);
        if (gap < min_gap) {
          min_gap = gap;
          at = e[a].n;
        }
      }
    }
    ConditionCheck c{"distinct", at, 0, min_gap, kGroupingTolerance, min_gap > kGroupingTolerance};
    rep.checks.push_back(c);
  }

  for (const Group& g : model.groups()) {
    if (std::abs(g.start) > n_star) continue;
    const int m = g.multiplicity;
    const int k = g.start;
    for (int s = 0; s <= 2 * (m - 1); ++s) {
      cplx sum = 0.0;
      for (int nu = 0; nu < m; ++nu) {
        const int idx = advance_index(k, nu);
        sum += ipow(data.lambda(idx) - g.lambda, s) * data.M(idx);
      }
      if (s < m) {
        sum -= model.M(advance_index(k, s));
        add("moment", k, s, std::abs(sum), delta);
      } else {
        add("higher_moment", k, s, std::abs(sum), delta);
      }
    }
    for (int nu = 0; nu < m; ++nu) {
      const int idx = advance_index(k, nu);
      add("eigenvalue_distance", idx, 0, std::abs(data.lambda(idx) - g.lambda),
          std::pow(delta, 1.0 / m));
      add("residue_size", idx, 0, std::abs(data.M(idx)), std::pow(delta, (1.0 - m) / m));
    }
  }
  return rep;
}

SpectralDataSet truncate_hybrid(const SpectralDataSet& data, const SpectralDataSet& model, int N) {
  check_compatible(data, model);
  const int W = std::max(data.window(), model.window());
  for (const auto* set : {&data, &model}) {
    for (const Group& g : set->groups()) {
      const int last = g.member(g.multiplicity - 1);
      const bool inside_first = std::abs(g.start) <= N;
      const bool inside_last = std::abs(last) <= N;
      bool mixed = inside_first != inside_last;
      for (int nu = 0; nu < g.multiplicity && !mixed; ++nu) {
        mixed = (std::abs(g.member(nu)) <= N) != inside_first;
      }
      if (mixed) {
        throw Error(ErrorKind::IndexMismatch,
                    "truncation level " + std::to_string(N) + " splits the group at " +
                        std::to_string(g.start));
      }
    }
  }
  std::vector<SpectralEntry> raw;
  for (int n = -W; n <= W; ++n) {
    if (n == 0) continue;
    raw.push_back(std::abs(n) <= N ? data.entry(n) : model.entry(n));
  }
  return normalize_ordering(raw, model.tail(), model.omega0());
}

std::map<int, cplx> weights_from_residues(const SpectralDataSet& data) {
  std::map<int, cplx> alpha;
  for (const Group& g : data.groups()) {
    const int m = g.multiplicity;
    auto Mi = [&](int off) { return data.M(g.member(off)); };
    const cplx top = Mi(m - 1);
    for (int nu = 0; nu < m; ++nu) {
      cplx rhs = nu == 0 ? -1.0 : 0.0;
      for (int j = 1; j <= nu; ++j) rhs -= alpha.at(g.member(nu - j)) * Mi(m - j - 1);
      alpha[g.member(nu)] = rhs / top;
    }
  }
  return alpha;
}

std::map<int, cplx> residues_from_weights(const SpectralDataSet& data,
                                          const std::map<int, cplx>& alpha) {
  std::map<int, cplx> M;
  for (const Group& g : data.groups()) {
    const int m = g.multiplicity;
    auto al = [&](int off) { return alpha.at(g.member(off)); };
    for (int nu = 0; nu < m; ++nu) {
      cplx rhs = nu == 0 ? -1.0 : 0.0;
      for (int j = 0; j < nu; ++j) rhs -= al(nu - j) * M.at(g.member(m - j - 1));
      M[g.member(m - 1 - nu)] = rhs / al(0);
    }
  }
  return M;
}

}  // namespace pencil
