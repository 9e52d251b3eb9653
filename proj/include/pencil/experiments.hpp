#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pencil/inverse.hpp"

namespace pencil {

/// Splitting of the double eigenvalue 0.5 (Laurent pair -1/pi, -i/(2 pi)) into
/// two simple eigenvalues at distance ~sqrt(delta); all other data are those of
/// the zero pencil.  delta = 0 returns the unsplit double-eigenvalue data.
SpectralDataSet make_split_data(double delta);

struct DMetrics {
  double d1 = 0.0;
  double d0 = 0.0;
};

/// Against the background: d1 = max |q1 - q1_background|, d0 = max |q0_antideriv|.
DMetrics compute_d_metrics(const RecoveredPotentials& recovered);

/// Against another recovered pencil on the same grid.
DMetrics compute_d_metrics(const RecoveredPotentials& recovered, const RecoveredPotentials& reference);

/// max(max over the contour |Mhat_*|, sqrt(sum_{|n| > n_star} (n xi_n)^2)).
double compute_split_delta_metric(const SpectralDataSet& data, const SpectralDataSet& model,
                                  int n_star, double contour_radius, int nodes = 512);

struct ExperimentRow {
  double delta = 0.0;
  double d1 = NAN;
  double d0 = NAN;
  cplx lambda_plus, lambda_minus, M_plus, M_minus;
  bool extension = false;
  /// Winding number of Delta around 0.5 for the delta = 0 row.
  std::optional<int> winding;
  std::string error;
};

struct SplitExperimentConfig {
  std::vector<double> deltas;
  int n_grid = 200;
  double contour_radius = 0.8;
  int n_star = 1;
  /// Adds the delta = 0 multiplicity row.
  bool include_zero = false;
  int refine = 10;
  /// Directory for table.csv and per-delta plot files; nothing is written when empty.
  std::string out_dir;
  Execution execution = Execution::Parallel;
};

struct TableResult {
  std::vector<ExperimentRow> rows;
  /// Potentials recovered for each row (same order), empty on failure.
  std::vector<std::optional<RecoveredPotentials>> potentials;
};

TableResult run_table(const SplitExperimentConfig& config);

struct RoundtripEntry {
  int n = 0;
  cplx lambda_in, lambda_out, M_in, M_out;
  double lambda_error = 0.0;
  double M_rel_error = 0.0;
};

struct RoundtripOptions {
  InverseOptions inverse;
  EigenSearchOptions search;
  int refine = 10;
};

struct RoundtripReport {
  std::vector<RoundtripEntry> entries;
  double max_lambda_error = 0.0;
  double max_M_rel_error = 0.0;
};

RoundtripReport roundtrip_check(const SpectralDataSet& data,
                                std::shared_ptr<const BackgroundProblem> background, int n_check,
                                const RoundtripOptions& options = {});

}  // namespace pencil
