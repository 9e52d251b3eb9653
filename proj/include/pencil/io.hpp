#pragma once

#include <string>
#include <vector>

#include "pencil/experiments.hpp"

namespace pencil::io {

/// Round-trip-safe decimal form (17 significant digits).
std::string format_number(double v);

SpectralDataSet parse_spectral_json(const std::string& text);
std::string spectral_to_json(const SpectralDataSet& data);
SpectralDataSet read_spectral_json(const std::string& path);
void write_spectral_json(const SpectralDataSet& data, const std::string& path);

/// Header x,re_q1,im_q1,re_sigma,im_sigma (re_q0ad/im_q0ad accepted for the
/// last two columns).
PotentialPair parse_potentials_csv(const std::string& text);
PotentialPair read_potentials_csv(const std::string& path);
std::string potentials_to_csv(const PotentialPair& p);
void write_potentials_csv(const PotentialPair& p, const std::string& path);

/// Header x,re_q1,im_q1,re_q0ad,im_q0ad.
std::string recovered_to_csv(const RecoveredPotentials& r);
void write_recovered_csv(const RecoveredPotentials& r, const std::string& path);

std::string table_to_csv(const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> parse_table_csv(const std::string& text);

/// File name used for per-delta plot data.
std::string plot_file_name(double delta);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pencil::io
