// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pencil/contour.hpp"
#include "pencil/experiments.hpp"

using namespace pencil;

namespace {

struct PublishedRow {
  double delta;
  double d1, d0;
  const char* l1;
  const char* lm1;
  const char* M1;
  const char* Mm1;
};

// Published split-table values (N = 200).
const PublishedRow kTable[] = {
    {0.05, 0.4157, 1.1131, "0.724", "0.276-0.200i", "-0.318-0.356i", "0.356i"},
    {0.02, 0.1881, 0.4805, "0.641", "0.359-0.080i", "-0.318-0.563i", "0.563i"},
    {0.01, 0.0982, 0.2463, "0.600", "0.400-0.040i", "-0.318-0.796i", "0.796i"},
    {0.005, 0.0501, 0.1242, "0.571", "0.429-0.020i", "-0.318-1.125i", "1.125i"},
    {0.002, 0.0202, 0.0498, "0.545", "0.455-0.008i", "-0.318-1.779i", "1.779i"},
    {0.001, 0.0101, 0.0248, "0.532", "0.468-0.004i", "-0.318-2.516i", "2.516i"},
    {0.0005, 0.0051, 0.0124, "0.522", "0.478-0.002i", "-0.318-3.559i", "3.559i"},
    {0.0002, 0.0020, 0.0049, "0.514", "0.486-0.0008i", "-0.318-5.627i", "5.627i"},
    {0.0001, 0.0010, 0.0024, "0.510", "0.490-0.0004i", "-0.318-7.958i", "7.958i"},
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s [%s] (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

int decimals(const std::string& s) {
  const auto dot = s.find('.');
  return dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string out = buf;
  if (out.find_first_not_of("-0.") == std::string::npos && out[0] == '-') out.erase(0, 1);
  return out;
}

// Splits "a+bi", "a-bi", "bi" or "a" into printed real and imaginary parts
// ("" for an absent part).
std::pair<std::string, std::string> parts(const std::string& s) {
  if (s.back() != 'i') return {s, ""};
  const std::string body = s.substr(0, s.size() - 1);
  const auto cut = body.find_first_of("+-", 1);
  if (cut == std::string::npos) return {"", body};
  std::string im = body.substr(cut);
  if (im[0] == '+') im.erase(0, 1);
  return {body.substr(0, cut), im};
}

// Value agrees with the printed string to its last digit; absent parts must
// round to zero at the other part's precision.
bool matches_printed(cplx z, const std::string& printed, std::string& why) {
  auto [re, im] = parts(printed);
  const int d = decimals(re.empty() ? im : re);
  const std::string want_re = re.empty() ? fixed(0.0, d) : re;
  const std::string want_im = im.empty() ? fixed(0.0, decimals(re)) : im;
  const std::string got_re = fixed(z.real(), decimals(want_re));
  const std::string got_im = fixed(z.imag(), decimals(want_im));
  if (got_re != want_re || got_im != want_im) {
    why = printed + " vs " + got_re + (got_im[0] == '-' ? "" : "+") + got_im + "i";
    return false;
  }
  return true;
}

Outcome table_reproduction() {
  SplitExperimentConfig cfg;
  for (const auto& r : kTable) cfg.deltas.push_back(r.delta);
  const auto t0 = std::chrono::steady_clock::now();
  const TableResult res = run_table(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  double worst1 = 0.0, worst0 = 0.0;
  std::ostringstream bad;
  for (size_t i = 0; i < res.rows.size(); ++i) {
    const auto& row = res.rows[i];
    const auto& pub = kTable[i];
    if (!row.error.empty()) {
      o.pass = false;
      bad << " delta=" << pub.delta << " failed: " << row.error;
      continue;
    }
    const double e1 = std::abs(row.d1 - pub.d1) / pub.d1;
    const double e0 = std::abs(row.d0 - pub.d0) / pub.d0;
    worst1 = std::max(worst1, e1);
    worst0 = std::max(worst0, e0);
    if (e1 > 0.02 || e0 > 0.03) {
      o.pass = false;
      bad << " delta=" << pub.delta << " d1=" << row.d1 << " d0=" << row.d0;
    }
  }
  if (secs > 30.0) {
    o.pass = false;
    bad << " runtime " << secs << " s";
  }
  std::ostringstream os;
  os << "max rel err d1 " << worst1 * 100 << "% (limit 2%), d0 " << worst0 * 100 << "% (limit 3%), sweep "
     << secs << " s" << bad.str();
  o.detail = os.str();
  return o;
}

Outcome split_algebra() {
  Outcome o;
  int checked = 0;
  std::ostringstream bad;
  for (const auto& pub : kTable) {
    const auto d = make_split_data(pub.delta);
    const std::pair<cplx, const char*> cols[] = {
        {d.lambda(1), pub.l1}, {d.lambda(-1), pub.lm1}, {d.M(1), pub.M1}, {d.M(-1), pub.Mm1}};
    for (const auto& [z, s] : cols) {
      std::string why;
      ++checked;
      if (!matches_printed(z, s, why)) {
        o.pass = false;
        bad << " delta=" << pub.delta << ": " << why;
      }
    }
  }
  o.detail = std::to_string(checked) + " printed entries compared" + bad.str();
  return o;
}

Outcome forward_baseline() {
  const auto t0 = std::chrono::steady_clock::now();
  const Shooter sh(PotentialPair::zero(200));
  const auto ev = weyl_residues(sh, find_eigenvalues(sh, 10, 0.0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double el = 0.0, eM = 0.0;
  for (int n = -10; n <= 10; ++n) {
    if (n == 0) continue;
    el = std::max(el, std::abs(ev.lambda(n) - double(n)));
    eM = std::max(eM, std::abs(ev.M(n) + n / kPi));
  }
  std::ostringstream os;
  os << "max |lambda_n - n| = " << el << ", max |M_n + n/pi| = " << eM << ", " << secs << " s";
  return {el < 1e-8 && eM < 1e-6 && ev.all_simple() && secs < 5.0, os.str()};
}

Outcome duality() {
  const PotentialPair p = fixture::random_smooth(2024);
  double bound = 0.0;
  for (size_t k = 0; k < p.q1.size(); ++k) bound = std::max(bound, std::abs(p.q1[k]));
  const Shooter sh(p);
  const auto ev = weyl_residues(sh, find_eigenvalues(sh, 5, 0.0));
  const auto alpha = weight_numbers(sh, ev);
  double worst = 0.0;
  int simple = 0;
  for (const Group& g : ev.groups()) {
    if (g.multiplicity != 1 || std::abs(g.start) > 5) continue;
    ++simple;
    worst = std::max(worst, std::abs(alpha.at(g.start) * ev.M(g.start) + 1.0));
  }
  std::ostringstream os;
  os << simple << " simple eigenvalues, max |alpha M + 1| = " << worst << ", max |q1| = " << bound;
  return {simple == 10 && worst < 1e-5 && bound <= 1.0, os.str()};
}

Outcome uniqueness() {
  InverseOptions opt;
  opt.active_window = 3;
  const auto rec = run_algorithm1(zero_spectral_data(3), BackgroundProblem::zero(), opt);
  const auto m = compute_d_metrics(rec);
  std::ostringstream os;
  os << rec.unknowns.size() << " unknowns, max |q1| = " << m.d1 << ", max |q0 antiderivative| = " << m.d0;
  return {m.d1 < 1e-10 && m.d0 < 1e-10 && !rec.unknowns.empty(), os.str()};
}

Outcome round_trip() {
  const auto rep = roundtrip_check(make_split_data(0.01), BackgroundProblem::zero(), 3);
  double l1 = 0.0, ln = 0.0, m1 = 0.0;
  for (const auto& e : rep.entries) {
    if (std::abs(e.n) == 1) {
      l1 = std::max(l1, e.lambda_error);
      m1 = std::max(m1, e.M_rel_error);
    } else {
      ln = std::max(ln, e.lambda_error);
    }
  }
  std::ostringstream os;
  os << "lambda_{+-1} err " << l1 << ", lambda_n (2<=|n|<=3) err " << ln << ", M_{+-1} rel err " << m1;
  return {l1 < 1e-3 && ln < 1e-3 && m1 < 1e-2, os.str()};
}

Outcome multiplicity() {
  const auto rec = run_algorithm1(make_split_data(0.0), BackgroundProblem::zero());
  const Shooter sh(rec.as_potentials());
  const double w = winding_number(sh, 0.5, 0.05, 256);
  const int dense = oracle::phase_winding([&](cplx z) { return sh.delta(z); }, 0.5, 0.05);
  // Laurent coefficients from the contour: (1/2 pi i) \oint (l - 1/2)^nu M(l) dl.
  const int K = 256;
  cplx c0 = 0.0, c1 = 0.0;
  for (int j = 0; j < K; ++j) {
    const cplx u = 0.05 * std::exp(kI * (2.0 * kPi * j / K));
    const cplx Mv = sh.weyl(0.5 + u);
    c0 += u * Mv / double(K);
    c1 += u * u * Mv / double(K);
  }
  const double e0 = oracle::rel(c0, -1.0 / kPi), e1 = oracle::rel(c1, -kI / (2.0 * kPi));
  std::ostringstream os;
  os << "winding " << w << " (dense phase count " << dense << "), Laurent rel err " << e0 * 100 << "%, "
     << e1 * 100 << "%";
  return {std::abs(w - 2.0) < 1e-3 && dense == 2 && e0 < 0.01 && e1 < 0.01, os.str()};
}

Outcome equivalence() {
  const auto data = make_split_data(0.01);
  const auto bg = BackgroundProblem::zero();
  MainEquationContext ctx(data, bg);
  ContourMainEquation ce(data, bg->spectral_data(), 1, 0.0, 1.5);
  double worst = 0.0;
  for (int k : {0, 50, 100, 150, 200}) {
    const auto sol = solve_main(ctx.assemble(k));
    ce.solve(ctx.grid().x(k));
    for (size_t i = 0; i < ctx.unknowns().size(); ++i) {
      const auto& u = ctx.unknowns()[i];
      worst = std::max(worst, std::abs(ce.value(u.lambda, u.nu) - sol.v(static_cast<Eigen::Index>(i))));
    }
  }
  std::ostringstream os;
  os << ctx.unknowns().size() << " unknowns at 5 nodes, max |v_seq - v_contour| = " << worst;
  return {worst < 1e-6, os.str()};
}

Outcome properties() {
  std::ostringstream os;
  bool ok = true;

  double wr = 0.0;
  for (unsigned seed : {1u, 2u, 3u}) {
    const Shooter sh(fixture::random_smooth(seed));
    for (cplx l : {cplx(2.0, 1.0), cplx(-0.7, 0.3), cplx(6.5, -0.2)}) {
      for (const auto& t : sh.integrate(l, true).trace) wr = std::max(wr, std::abs(t[0] * t[3] - t[1] * t[2] + 1.0));
    }
  }
  ok &= wr < 1e-9;
  os << "Wronskian dev " << wr;

  const PotentialPair coarse = fixture::random_smooth(9, 25);
  const cplx l(2.3, 0.2);
  const cplx d2 = Shooter(coarse, 2).delta(l), d4 = Shooter(coarse, 4).delta(l), d8 = Shooter(coarse, 8).delta(l);
  const double order = std::log2(std::abs(d2 - d4) / std::abs(d4 - d8));
  ok &= std::abs(order - 4.0) < 0.3;
  os << "; Delta step-halving order " << order;

  const auto data = make_split_data(0.01);
  const auto bg = BackgroundProblem::zero();
  double err[2];
  for (int level = 0; level < 2; ++level) {
    InverseOptions opt;
    opt.grid = Grid{200 << level};
    MainEquationContext ctx(data, bg, opt);
    const int k = 70 << level;
    const Eigen::VectorXcd fd =
        (solve_main(ctx.assemble(k + 1)).v - solve_main(ctx.assemble(k - 1)).v) / (2.0 * opt.grid.step());
    err[level] = (fd - solve_main(ctx.assemble(k)).v_x).cwiseAbs().maxCoeff();
  }
  const double vx_order = std::log2(err[0] / err[1]);
  ok &= std::abs(vx_order - 2.0) < 0.2;
  os << "; v_x finite-difference order " << vx_order;

  const auto rec = run_algorithm1(data, bg);
  double th = 0.0;
  for (size_t k = 0; k < rec.eps.Theta.size(); ++k) {
    const cplx t = rec.eps.Theta[k], e = rec.eps.eps1[k];
    th = std::max(th, std::abs(t * t * (1.0 + e * e) - 1.0));
  }
  ok &= th < 1e-13;
  os << "; max |Theta^2 (1 + eps1^2) - 1| = " << th;
  return {ok, os.str()};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  report(1, "split-table d1/d0 reproduction", table_reproduction);
  report(2, "split-data lambda and M columns", split_algebra);
  report(3, "forward baseline for zero potentials", forward_baseline);
  report(4, "weight/residue duality", duality);
  report(5, "inverse of model data is zero", uniqueness);
  report(6, "round trip for delta = 0.01", round_trip);
  report(7, "double eigenvalue winding and Laurent pair", multiplicity);
  report(8, "sequence vs contour main equation", equivalence);
  report(9, "numerical-analysis properties", [&] {
    const auto s = std::chrono::steady_clock::now();
    Outcome o = properties();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - s).count();
    o.pass = o.pass && secs < 60.0;
    return o;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 9 criteria failed (%.1f s)\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
