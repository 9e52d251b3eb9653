#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "pencil/experiments.hpp"
#include "pencil/io.hpp"

using namespace pencil;

namespace {

enum Exit { kOk = 0, kValidation = 2, kNumerical = 3, kIo = 4 };

struct Profile {
  int refine = 10;
  EigenSearchOptions search;
};

Profile make_profile(const std::string& name, int n_star) {
  Profile p;
  if (name == "fine") {
    p.refine = 20;
    p.search.contour_nodes = 256;
    p.search.newton_tol = 1e-13;
  } else if (name == "fast") {
    p.refine = 5;
    p.search.contour_nodes = 64;
    p.search.newton_tol = 1e-10;
  }
  p.search.n_star = n_star;
  return p;
}

std::string fmt(cplx z, int digits = 4) {
  char buf[96];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.*f", digits, z.real());
  } else if (z.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.*fi", digits, z.imag());
  } else {
    std::snprintf(buf, sizeof buf, "%.*f%+.*fi", digits, z.real(), digits, z.imag());
  }
  return buf;
}

// (1/pi) int q1, shifted by an integer into Re in (-1/2, 1/2]; an integer
// shift only relabels the indices.
cplx omega0_of(const PotentialPair& p) {
  const cplx w = simpson(p.q1, p.grid.step()) / kPi;
  return w - std::ceil(w.real() - 0.5);
}

std::vector<double> parse_deltas(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "'" + item + "' is not a number");
    }
  }
  return out;
}

int exit_code(const Error& e) {
  switch (classify(e.kind())) {
    case ErrorClass::Validation: return kValidation;
    case ErrorClass::Numerical: return kNumerical;
    case ErrorClass::Io: return kIo;
  }
  return kNumerical;
}

std::shared_ptr<const BackgroundProblem> load_background(const std::string& path, int n_max, cplx omega0,
                                                         const Profile& prof) {
  if (path.empty()) return BackgroundProblem::zero();
  return BackgroundProblem::numeric_from_potentials(io::read_potentials_csv(path), n_max, omega0, prof.search,
                                                    prof.refine);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward and inverse spectral problems for the Dirichlet quadratic pencil"};
  app.require_subcommand(1);
  app.fallthrough();

  int grid_n = 200;
  int trunc_n = -1;
  double contour_r = 0.8;
  int n_star = 1;
  std::string out_dir;
  std::string profile_name = "standard";
  app.add_option("--grid-n", grid_n, "Intervals of the output grid on [0, pi]")->check(CLI::PositiveNumber);
  app.add_option("--trunc-n", trunc_n, "Truncation level: data beyond |n| are replaced by the background");
  app.add_option("--contour-r", contour_r, "Radius of the contour used by the split-delta metric")
      ->check(CLI::PositiveNumber);
  app.add_option("--n-star", n_star, "Indices |n| <= n_star are searched together in the low disc")
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", out_dir, "Directory for output files");
  app.add_option("--tolerance-profile", profile_name, "Integration and root-finding accuracy")
      ->check(CLI::IsMember({"standard", "fine", "fast"}));

  auto* fwd = app.add_subcommand("forward", "Potentials CSV -> spectral JSON");
  std::string fwd_in, fwd_out;
  int fwd_nmax = 10;
  std::vector<double> fwd_omega;
  fwd->add_option("potentials", fwd_in, "Potentials CSV (x,re_q1,im_q1,re_sigma,im_sigma)")->required();
  fwd->add_option("-o,--output", fwd_out, "Spectral JSON (default: stdout or <out-dir>/spectral.json)");
  fwd->add_option("--n-max", fwd_nmax, "Largest |n| to compute")->check(CLI::PositiveNumber);
  fwd->add_option("--omega0", fwd_omega, "Eigenvalue shift as RE IM (default: from the mean of q1)")
      ->expected(2);

  auto* inv = app.add_subcommand("inverse", "Spectral JSON -> potentials CSV");
  std::string inv_in, inv_out, inv_bg;
  int inv_bg_nmax = 6;
  inv->add_option("spectral", inv_in, "Spectral JSON")->required();
  inv->add_option("-o,--output", inv_out, "Potentials CSV (default: stdout or <out-dir>/potentials.csv)");
  inv->add_option("--background", inv_bg, "Potentials CSV of a numeric background (default: zero potentials)");
  inv->add_option("--background-n-max", inv_bg_nmax, "Eigenvalues computed for the numeric background")
      ->check(CLI::PositiveNumber);

  auto* tab = app.add_subcommand("split-table", "Splitting experiment: table CSV and per-delta plot CSVs");
  std::string tab_deltas = "0.05,0.02,0.01,0.005,0.002,0.001,0.0005,0.0002,0.0001";
  bool tab_zero = false, tab_serial = false;
  tab->add_option("--deltas", tab_deltas, "Comma-separated delta values");
  tab->add_flag("--include-zero", tab_zero, "Add the unsplit delta = 0 row (double eigenvalue)");
  tab->add_flag("--serial", tab_serial, "Run rows and grid nodes on one thread");

  auto* rt = app.add_subcommand("roundtrip", "Spectral JSON -> inverse -> forward, report discrepancies");
  std::string rt_in;
  int rt_check = 3;
  rt->add_option("spectral", rt_in, "Spectral JSON")->required();
  rt->add_option("--n-check", rt_check, "Compare indices 1 <= |n| <= n-check")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  const Profile prof = make_profile(profile_name, n_star);
  InverseOptions iopt;
  iopt.grid = Grid{grid_n};
  auto out_path = [&](const std::string& explicit_path, const std::string& name) {
    if (!explicit_path.empty()) return explicit_path;
    return out_dir.empty() ? std::string() : out_dir + "/" + name;
  };

  try {
    if (*fwd) {
      const PotentialPair p = io::read_potentials_csv(fwd_in);
      const int n_max = trunc_n > 0 ? trunc_n : fwd_nmax;
      const Shooter sh(p, prof.refine);
      const cplx omega0 = fwd_omega.size() == 2 ? cplx(fwd_omega[0], fwd_omega[1]) : omega0_of(p);
      const SpectralDataSet ev = weyl_residues(sh, find_eigenvalues(sh, n_max, omega0, prof.search));
      const std::string json = io::spectral_to_json(ev);
      const std::string path = out_path(fwd_out, "spectral.json");
      if (path.empty()) {
        std::cout << json;
      } else {
        io::write_file(path, json);
        std::cerr << "wrote " << ev.entries().size() << " entries to " << path << "\n";
      }
    } else if (*inv) {
      SpectralDataSet data = io::read_spectral_json(inv_in);
      const auto bg = load_background(inv_bg, inv_bg_nmax, data.omega0(), prof);
      if (trunc_n >= 0) data = truncate_hybrid(data, bg->spectral_data(), trunc_n);
      const RecoveredPotentials rec = run_algorithm1(data, bg, iopt);
      double worst = 0.0;
      for (const auto& nd : rec.nodes) worst = std::max(worst, nd.condition);
      const std::string csv = io::potentials_to_csv(rec.as_potentials());
      const std::string path = out_path(inv_out, "potentials.csv");
      if (path.empty()) {
        std::cout << csv;
      } else {
        io::write_file(path, csv);
      }
      std::cerr << rec.unknowns.size() << " unknowns, max condition estimate " << worst << "\n";
    } else if (*tab) {
      SplitExperimentConfig cfg;
      cfg.deltas = parse_deltas(tab_deltas);
      cfg.n_grid = grid_n;
      cfg.contour_radius = contour_r;
      cfg.n_star = n_star;
      cfg.include_zero = tab_zero;
      cfg.refine = prof.refine;
      cfg.out_dir = out_dir;
      cfg.execution = tab_serial ? Execution::Serial : Execution::Parallel;
      const TableResult res = run_table(cfg);
      const SpectralDataSet model = make_split_data(0.0);
      std::printf("%-8s %-8s %-8s %-10s %-18s %-18s %-10s %s\n", "delta", "d1", "d0", "lambda1", "lambda-1", "M1",
                  "M-1", "metric");
      bool failed = false;
      for (const auto& row : res.rows) {
        if (!row.error.empty()) {
          std::printf("%-8g error: %s\n", row.delta, row.error.c_str());
          failed = true;
          continue;
        }
        std::string metric = "-";
        if (row.delta > 0.0) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.4f",
                        compute_split_delta_metric(make_split_data(row.delta), model, n_star, contour_r));
          metric = buf;
        }
        std::printf("%-8g %-8.4f %-8.4f %-10s %-18s %-18s %-10s %s", row.delta, row.d1, row.d0,
                    fmt(row.lambda_plus).c_str(), fmt(row.lambda_minus).c_str(), fmt(row.M_plus).c_str(),
                    fmt(row.M_minus).c_str(), metric.c_str());
        if (row.extension) {
          std::printf("  extension: double eigenvalue, winding %d", row.winding.value_or(-1));
        }
        std::printf("\n");
      }
      if (!out_dir.empty()) std::fprintf(stderr, "wrote %s/table.csv\n", out_dir.c_str());
      if (failed) return kNumerical;
    } else if (*rt) {
      SpectralDataSet data = io::read_spectral_json(rt_in);
      const auto bg = BackgroundProblem::zero();
      if (trunc_n >= 0) data = truncate_hybrid(data, bg->spectral_data(), trunc_n);
      RoundtripOptions ro;
      ro.inverse = iopt;
      ro.search = prof.search;
      ro.refine = prof.refine;
      const RoundtripReport rep = roundtrip_check(data, bg, rt_check, ro);
      std::printf("%-4s %-24s %-24s %-10s %s\n", "n", "lambda_in", "lambda_out", "|dlambda|", "M rel err");
      for (const auto& e : rep.entries) {
        std::printf("%-4d %-24s %-24s %-10.2e %.2e\n", e.n, fmt(e.lambda_in, 6).c_str(), fmt(e.lambda_out, 6).c_str(),
                    e.lambda_error, e.M_rel_error);
      }
      std::printf("max eigenvalue error %.3e, max residue relative error %.3e\n", rep.max_lambda_error,
                  rep.max_M_rel_error);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  }
  return kOk;
}
