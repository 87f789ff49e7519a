#pragma once

#include <map>
#include <string>
#include <vector>

#include "heisen/lattice.hpp"
#include "heisen/radial.hpp"
#include "heisen/transform.hpp"

namespace heisen {

/// Flat key = value configuration (sections by key prefix, '#' comments).
using Config = std::map<std::string, std::string>;

Config parse_config_string(const std::string& text);
Config parse_config_file(const std::string& path);
void write_config(const std::string& path, const Config& cfg);

double config_get(const Config& cfg, const std::string& key, double fallback);
int config_get(const Config& cfg, const std::string& key, int fallback);
std::string config_get(const Config& cfg, const std::string& key, const std::string& fallback);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Generic CSV table: header row then stringified rows.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& vals);
};
void write_csv(const std::string& path, const CsvTable& table);

/// Lattice field snapshot: comment header with n/h/bounds, then one row per
/// node with columns x...,y...,s,value.
void write_field_csv(const std::string& path, const LatticeDomain& lat,
                     const std::vector<double>& values);

/// Radial profile: rows (r, s, re, im).
void write_profile_csv(const std::string& path, const RadialProfile& f);

/// Spectral coefficients: rows (lambda, k, re, im).
void write_coefficients_csv(const std::string& path, const SpectralCoefficients& c);

}  // namespace heisen
