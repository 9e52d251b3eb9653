#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pencil/types.hpp"

namespace pencil {

/// Absolute tolerance under which two eigenvalues are treated as equal.
inline constexpr double kGroupingTolerance = 1e-9;

/// Successor of n in Z0 = {..., -2, -1, 1, 2, ...}.
int next_index(int n);
/// Predecessor of n in Z0.
int prev_index(int n);
/// n advanced by k >= 0 steps in Z0.
int advance_index(int n, int k);

struct SpectralEntry {
  int n = 0;
  cplx lambda;
  cplx M;
};

/// A run of consecutive indices start, start+1, ... (in Z0) sharing one eigenvalue.
struct Group {
  int start = 0;
  int multiplicity = 1;
  cplx lambda;

  /// Index of the nu-th member.
  int member(int nu) const { return advance_index(start, nu); }
};

/// Supplies the spectral data for indices outside a stored window.  Tail
/// eigenvalues are always simple.
class SpectralTail {
 public:
  virtual ~SpectralTail() = default;
  virtual cplx lambda(int n) const = 0;
  virtual cplx M(int n) const = 0;
  virtual cplx omega0() const = 0;
  virtual std::string name() const = 0;
};

/// lambda_n = n + omega0, M_n = -n / pi.  Exact for the unperturbed pencil
/// when omega0 = 0.
class FreeTail final : public SpectralTail {
 public:
  explicit FreeTail(cplx omega0 = 0.0) : omega0_(omega0) {}
  cplx lambda(int n) const override { return static_cast<double>(n) + omega0_; }
  cplx M(int n) const override { return -static_cast<double>(n) / kPi; }
  cplx omega0() const override { return omega0_; }
  std::string name() const override;

 private:
  cplx omega0_;
};

std::shared_ptr<const SpectralTail> zero_tail();

/// Spectral data {lambda_n, M_n} on a finite window |n| <= N with a tail
/// beyond it.  Immutable; build through normalize_ordering.
class SpectralDataSet {
 public:
  SpectralDataSet();

  int window() const { return window_; }
  const std::vector<SpectralEntry>& entries() const { return entries_; }
  const std::vector<Group>& groups() const { return groups_; }
  cplx omega0() const { return omega0_; }
  const std::shared_ptr<const SpectralTail>& tail() const { return tail_; }

  SpectralEntry entry(int n) const;
  cplx lambda(int n) const { return entry(n).lambda; }
  cplx M(int n) const { return entry(n).M; }

  /// Group containing index n and the position of n inside it.
  std::pair<Group, int> group_of(int n) const;

  bool all_simple() const;

  /// Copy with the residues replaced (same indices and eigenvalues).
  SpectralDataSet with_residues(const std::map<int, cplx>& M) const;

 private:
  friend SpectralDataSet normalize_ordering(std::vector<SpectralEntry>,
                                            std::shared_ptr<const SpectralTail>,
                                            std::optional<cplx>);
  size_t position(int n) const;

  int window_ = 0;
  std::vector<SpectralEntry> entries_;
  std::vector<Group> groups_;
  std::vector<size_t> group_of_entry_;
  std::shared_ptr<const SpectralTail> tail_;
  cplx omega0_;
};

/// Regroups raw entries so that equal eigenvalues occupy consecutive indices.
/// Window indices absent from raw are filled from the tail.  When omega0 is
/// not given, the tail's value is used.
SpectralDataSet normalize_ordering(std::vector<SpectralEntry> raw,
                                   std::shared_ptr<const SpectralTail> tail = zero_tail(),
                                   std::optional<cplx> omega0 = std::nullopt);

/// Mean of (lambda_n - n) over the five largest |n| of the window.
cplx estimate_omega0(const std::vector<SpectralEntry>& entries);

/// Window/tail of the unperturbed pencil: lambda_n = n, M_n = -n/pi.
SpectralDataSet zero_spectral_data(int N);

struct Diagnostics {
  std::map<int, double> theta;
  std::map<int, double> chi;
  std::map<int, double> xi;
  double Omega = 0.0;
  /// Omega_N for N = 0 .. max(requested N, window).
  std::map<int, double> OmegaN;
};

/// Checks that two data sets share their tail beyond both windows.
void check_compatible(const SpectralDataSet& data, const SpectralDataSet& model);

Diagnostics compute_diagnostics(const SpectralDataSet& data, const SpectralDataSet& model, int N);

/// sqrt(sum_l 1 / (l^2 (|l-k|+1)^2)) over nonzero l.
double eta(int k);

struct ConditionCheck {
  std::string name;
  int index = 0;
  int s = 0;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct SplittingReport {
  std::vector<ConditionCheck> checks;

  bool all_pass() const;
  std::vector<ConditionCheck> violations() const;
};

/// Evaluates the local-stability conditions for data close to a model with
/// (possibly multiple) eigenvalues at |n| <= n_star.  Each bound is
/// multiplied by slack.
SplittingReport validate_splitting_conditions(const SpectralDataSet& data,
                                              const SpectralDataSet& model, int n_star,
                                              double delta, double slack = 1.0);

/// Data values for |n| <= N, model values elsewhere.
SpectralDataSet truncate_hybrid(const SpectralDataSet& data, const SpectralDataSet& model, int N);

/// Weight numbers from residues and back, group by group.
std::map<int, cplx> weights_from_residues(const SpectralDataSet& data);
std::map<int, cplx> residues_from_weights(const SpectralDataSet& data,
                                          const std::map<int, cplx>& alpha);

}  // namespace pencil
