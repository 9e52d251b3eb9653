#include "pencil/experiments.hpp"

#include <cmath>
#include <sstream>

#include "pencil/contour.hpp"
#include "pencil/io.hpp"

namespace pencil {

namespace {

const cplx kM0 = -1.0 / kPi;             // residue of the double pole
const cplx kM1 = -kI / (2.0 * kPi);      // coefficient of (l - 0.5)^{-2}

}  // namespace

SpectralDataSet make_split_data(double delta) {
  if (!(delta >= 0.0)) {
    std::ostringstream os;
    os << "delta = " << delta << " must be nonnegative";
    throw Error(ErrorKind::NegativeDelta, os.str());
  }
  std::vector<SpectralEntry> raw;
  if (delta == 0.0) {
    raw.push_back({-1, 0.5, kM0});
    raw.push_back({1, 0.5, kM1});
  } else {
    const cplx a = kM1 / 2.0;
    const cplx c = kM0 / a;
    const double s = std::sqrt(delta);
    raw.push_back({1, 0.5 + s, a / s + kM0});
    raw.push_back({-1, 0.5 - s + c * delta, -a / s});
  }
  return normalize_ordering(raw, zero_tail(), cplx(0.0));
}

DMetrics compute_d_metrics(const RecoveredPotentials& recovered) {
  DMetrics m;
  const auto& bg = recovered.background ? recovered.background : BackgroundProblem::zero();
  for (int k = 0; k < recovered.grid.size(); ++k) {
    const auto uk = static_cast<size_t>(k);
    cplx qt = 0.0;
    if (bg->kind() == BackgroundProblem::Kind::Numeric) {
      const Shooter& sh = bg->shooter();
      qt = sh.q1_fine(k * (sh.fine_intervals() / recovered.grid.n));
    }
    m.d1 = std::max(m.d1, std::abs(recovered.q1[uk] - qt));
    m.d0 = std::max(m.d0, std::abs(recovered.q0_antideriv[uk]));
  }
  return m;
}

DMetrics compute_d_metrics(const RecoveredPotentials& recovered, const RecoveredPotentials& reference) {
  if (recovered.grid.n != reference.grid.n || recovered.q1.size() != reference.q1.size()) {
    throw Error(ErrorKind::GridMismatch, "d-metrics need potentials on the same grid");
  }
  if (recovered.background != reference.background) {
    throw Error(ErrorKind::GridMismatch, "d-metrics need potentials over the same background");
  }
  DMetrics m;
  for (size_t k = 0; k < recovered.q1.size(); ++k) {
    m.d1 = std::max(m.d1, std::abs(recovered.q1[k] - reference.q1[k]));
    m.d0 = std::max(m.d0, std::abs(recovered.q0_antideriv[k] - reference.q0_antideriv[k]));
  }
  return m;
}

double compute_split_delta_metric(const SpectralDataSet& data, const SpectralDataSet& model,
                                  int n_star, double contour_radius, int nodes) {
  const int W = std::max({data.window(), model.window(), n_star}) + 2;
  for (const auto* set : {&data, &model}) {
    for (int n = -W; n <= W; ++n) {
      if (n == 0) continue;
      const double r = std::abs(set->lambda(n));
      const bool low = std::abs(n) <= n_star;
      const bool separated = low ? r < contour_radius * (1.0 - 1e-6) : r > contour_radius * (1.0 + 1e-6);
      if (!separated) {
        std::ostringstream os;
        os << "contour |l| = " << contour_radius << " does not separate index " << n << " (l = "
           << set->lambda(n) << ")";
        throw Error(ErrorKind::ContourTouchesPole, os.str());
      }
    }
  }
  double best = 0.0;
  for (int l = 0; l < nodes; ++l) {
    const cplx z = contour_radius * std::exp(kI * (2.0 * kPi * l / nodes));
    best = std::max(best, std::abs(rational_difference(data, model, n_star, z)));
  }
  const Diagnostics d = compute_diagnostics(data, model, n_star);
  return std::max(best, d.OmegaN.at(n_star));
}

TableResult run_table(const SplitExperimentConfig& config) {
  std::vector<double> deltas = config.deltas;
  if (config.include_zero) deltas.push_back(0.0);
  for (double d : deltas) make_split_data(d);  // rejects negative or NaN deltas before any work
  TableResult result;
  if (deltas.empty()) return result;

  InverseOptions inv;
  inv.grid = Grid{config.n_grid};
  inv.execution = Execution::Serial;
  auto bg = BackgroundProblem::zero();

  // The unsplit pencil is the reference every row is measured against.
  const RecoveredPotentials reference = run_algorithm1(make_split_data(0.0), bg,
                                                       InverseOptions{inv.grid, std::nullopt,
                                                                      inv.condition_limit,
                                                                      config.execution});

  result.rows.resize(deltas.size());
  result.potentials.resize(deltas.size());
  for_each_index(static_cast<int>(deltas.size()), config.execution, [&](int i) {
    const double delta = deltas[static_cast<size_t>(i)];
    ExperimentRow& row = result.rows[static_cast<size_t>(i)];
    row.delta = delta;
    row.extension = delta == 0.0;
    try {
      const SpectralDataSet data = make_split_data(delta);
      row.lambda_plus = data.lambda(1);
      row.lambda_minus = data.lambda(-1);
      row.M_plus = data.M(1);
      row.M_minus = data.M(-1);
      RecoveredPotentials rec = delta == 0.0 ? reference : run_algorithm1(data, bg, inv);
      const DMetrics d = compute_d_metrics(rec, reference);
      row.d1 = d.d1;
      row.d0 = d.d0;
      if (delta == 0.0) {
        const Shooter sh(rec.as_potentials(), config.refine);
        row.winding = static_cast<int>(std::lround(winding_number(sh, 0.5, 0.05)));
      }
      result.potentials[static_cast<size_t>(i)] = std::move(rec);
    } catch (const Error& e) {
      row.error = e.what();
    }
  });

  if (!config.out_dir.empty()) {
    io::write_file(config.out_dir + "/table.csv", io::table_to_csv(result.rows));
    for (size_t i = 0; i < deltas.size(); ++i) {
      if (!result.potentials[i]) continue;
      io::write_recovered_csv(*result.potentials[i], config.out_dir + "/" + io::plot_file_name(deltas[i]));
    }
  }
  return result;
}

RoundtripReport roundtrip_check(const SpectralDataSet& data,
                                std::shared_ptr<const BackgroundProblem> background, int n_check,
                                const RoundtripOptions& options) {
  const RecoveredPotentials rec = run_algorithm1(data, background, options.inverse);
  const Shooter sh(rec.as_potentials(), options.refine);
  const SpectralDataSet eig = find_eigenvalues(sh, n_check, data.omega0(), options.search);
  const SpectralDataSet out = weyl_residues(sh, eig);
  RoundtripReport rep;
  for (int n = -n_check; n <= n_check; ++n) {
    if (n == 0) continue;
    RoundtripEntry e;
    e.n = n;
    e.lambda_in = data.lambda(n);
    e.lambda_out = out.lambda(n);
    e.M_in = data.M(n);
    e.M_out = out.M(n);
    e.lambda_error = std::abs(e.lambda_in - e.lambda_out);
    e.M_rel_error = std::abs(e.M_in - e.M_out) / std::abs(e.M_in);
    rep.max_lambda_error = std::max(rep.max_lambda_error, e.lambda_error);
    rep.max_M_rel_error = std::max(rep.max_M_rel_error, e.M_rel_error);
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace pencil
