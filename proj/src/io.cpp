#include "pencil/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace pencil::io {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

cplx read_complex(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::Parse, what + " must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json write_complex(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, size_t line) {
  const std::string t = trim(field);
  try {
    size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    if (t == "nan" || t == "-nan") return NAN;
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": '" + t + "' is not a number");
  }
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!trim(line).empty()) out.push_back(trim(line));
  }
  return out;
}

}  // namespace

SpectralDataSet parse_spectral_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Parse, "spectral data must be a JSON object");
  const std::string model = j.value("model", std::string("dirichlet-zero"));
  if (model != "dirichlet-zero") throw Error(ErrorKind::Parse, "unsupported model '" + model + "'");
  std::optional<cplx> omega0;
  if (j.contains("omega0")) omega0 = read_complex(j["omega0"], "omega0");
  std::vector<SpectralEntry> raw;
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw Error(ErrorKind::Parse, "missing 'entries' array");
  }
  for (const auto& e : j["entries"]) {
    if (!e.contains("n") || !e["n"].is_number_integer()) {
      throw Error(ErrorKind::Parse, "entry without integer 'n'");
    }
    const int n = e["n"].get<int>();
    raw.push_back({n, read_complex(e.at("lambda"), "lambda of entry " + std::to_string(n)),
                   read_complex(e.at("M"), "M of entry " + std::to_string(n))});
  }
  std::shared_ptr<const SpectralTail> tail = zero_tail();
  if (omega0 && *omega0 != cplx(0.0)) tail = std::make_shared<FreeTail>(*omega0);
  return normalize_ordering(raw, tail, omega0);
}

std::string spectral_to_json(const SpectralDataSet& data) {
  json j;
  j["omega0"] = write_complex(data.omega0());
  j["model"] = "dirichlet-zero";
  j["entries"] = json::array();
  for (const auto& e : data.entries()) {
    j["entries"].push_back({{"n", e.n}, {"lambda", write_complex(e.lambda)}, {"M", write_complex(e.M)}});
  }
  return j.dump(2) + "\n";
}

SpectralDataSet read_spectral_json(const std::string& path) { return parse_spectral_json(read_file(path)); }

void write_spectral_json(const SpectralDataSet& data, const std::string& path) {
  write_file(path, spectral_to_json(data));
}

PotentialPair parse_potentials_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorKind::Parse, "empty potentials file");
  const auto header = split(lines[0], ',');
  const bool sigma = header == std::vector<std::string>{"x", "re_q1", "im_q1", "re_sigma", "im_sigma"};
  const bool q0ad = header == std::vector<std::string>{"x", "re_q1", "im_q1", "re_q0ad", "im_q0ad"};
  if (!sigma && !q0ad) throw Error(ErrorKind::Parse, "unexpected potentials header '" + lines[0] + "'");
  const int n = static_cast<int>(lines.size()) - 2;
  if (n < 1) throw Error(ErrorKind::GridMismatch, "potentials need at least two nodes");
  PotentialPair p = PotentialPair::zero(n);
  for (size_t r = 1; r < lines.size(); ++r) {
    const auto f = split(lines[r], ',');
    if (f.size() != 5) throw Error(ErrorKind::Parse, "line " + std::to_string(r + 1) + ": expected 5 fields");
    const int k = static_cast<int>(r) - 1;
    const double x = parse_double(f[0], r + 1);
    if (std::abs(x - p.grid.x(k)) > 1e-9) {
      throw Error(ErrorKind::GridMismatch, "line " + std::to_string(r + 1) + ": x = " + f[0] +
                                               " is not k*pi/" + std::to_string(n));
    }
    p.q1[static_cast<size_t>(k)] = {parse_double(f[1], r + 1), parse_double(f[2], r + 1)};
    p.sigma[static_cast<size_t>(k)] = {parse_double(f[3], r + 1), parse_double(f[4], r + 1)};
  }
  p.validate();
  return p;
}

PotentialPair read_potentials_csv(const std::string& path) { return parse_potentials_csv(read_file(path)); }

std::string potentials_to_csv(const PotentialPair& p) {
  std::ostringstream os;
  os << "x,re_q1,im_q1,re_sigma,im_sigma\n";
  for (int k = 0; k < p.grid.size(); ++k) {
    const auto uk = static_cast<size_t>(k);
    os << format_number(p.grid.x(k)) << ',' << format_number(p.q1[uk].real()) << ','
       << format_number(p.q1[uk].imag()) << ',' << format_number(p.sigma[uk].real()) << ','
       << format_number(p.sigma[uk].imag()) << '\n';
  }
  return os.str();
}

void write_potentials_csv(const PotentialPair& p, const std::string& path) {
  write_file(path, potentials_to_csv(p));
}

std::string recovered_to_csv(const RecoveredPotentials& r) {
  std::ostringstream os;
  os << "x,re_q1,im_q1,re_q0ad,im_q0ad\n";
  for (int k = 0; k < r.grid.size(); ++k) {
    const auto uk = static_cast<size_t>(k);
    os << format_number(r.grid.x(k)) << ',' << format_number(r.q1[uk].real()) << ','
       << format_number(r.q1[uk].imag()) << ',' << format_number(r.q0_antideriv[uk].real()) << ','
       << format_number(r.q0_antideriv[uk].imag()) << '\n';
  }
  return os.str();
}

void write_recovered_csv(const RecoveredPotentials& r, const std::string& path) {
  write_file(path, recovered_to_csv(r));
}

std::string table_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  os << "delta,d1,d0,re_l1,im_l1,re_lm1,im_lm1,re_M1,im_M1,re_Mm1,im_Mm1\n";
  for (const auto& r : rows) {
    const double vals[] = {r.delta,
                           r.d1,
                           r.d0,
                           r.lambda_plus.real(),
                           r.lambda_plus.imag(),
                           r.lambda_minus.real(),
                           r.lambda_minus.imag(),
                           r.M_plus.real(),
                           r.M_plus.imag(),
                           r.M_minus.real(),
                           r.M_minus.imag()};
    for (size_t i = 0; i < std::size(vals); ++i) os << (i ? "," : "") << format_number(vals[i]);
    os << '\n';
  }
  return os.str();
}

std::vector<ExperimentRow> parse_table_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != "delta,d1,d0,re_l1,im_l1,re_lm1,im_lm1,re_M1,im_M1,re_Mm1,im_Mm1") {
    throw Error(ErrorKind::Parse, "unexpected table header");
  }
  std::vector<ExperimentRow> rows;
  for (size_t r = 1; r < lines.size(); ++r) {
    const auto f = split(lines[r], ',');
    if (f.size() != 11) throw Error(ErrorKind::Parse, "line " + std::to_string(r + 1) + ": expected 11 fields");
    double v[11];
    for (size_t i = 0; i < 11; ++i) v[i] = parse_double(f[i], r + 1);
    ExperimentRow row;
    row.delta = v[0];
    row.d1 = v[1];
    row.d0 = v[2];
    row.lambda_plus = {v[3], v[4]};
    row.lambda_minus = {v[5], v[6]};
    row.M_plus = {v[7], v[8]};
    row.M_minus = {v[9], v[10]};
    rows.push_back(row);
  }
  return rows;
}

std::string plot_file_name(double delta) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", delta);
  return std::string("potentials_delta=") + buf + ".csv";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

}  // namespace pencil::io
