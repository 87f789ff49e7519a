#include "heisen/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace heisen {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config parse_config_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
        cfg[key] = val;
    }
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

void write_config(const std::string& path, const Config& cfg) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    for (const auto& [k, v] : cfg) out << k << " = " << v << "\n";
}

double config_get(const Config& cfg, const std::string& key, double fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not a number: " + it->second);
    }
}

int config_get(const Config& cfg, const std::string& key, int fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    try {
        std::size_t pos = 0;
        const int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not an integer: " + it->second);
    }
}

std::string config_get(const Config& cfg, const std::string& key, const std::string& fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec <= 16; ++prec) {
        char shorter[64];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

void CsvTable::add_row(const std::vector<double>& vals) {
    std::vector<std::string> r;
    r.reserve(vals.size());
    for (double v : vals) r.push_back(format_double(v));
    rows.push_back(std::move(r));
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_field_csv(const std::string& path, const LatticeDomain& lat,
                     const std::vector<double>& values) {
    if (values.size() != lat.node_count())
        throw std::invalid_argument("write_field_csv: field size mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    out << "# n=" << lat.n;
    for (std::size_t a = 0; a < lat.dim(); ++a)
        out << " axis" << a << "=(min=" << format_double(lat.axes[a].min)
            << ",h=" << format_double(lat.axes[a].h) << ",count=" << lat.axes[a].count << ")";
    out << "\n";
    for (int j = 1; j <= lat.n; ++j) out << "x" << j << ",";
    for (int j = 1; j <= lat.n; ++j) out << "y" << j << ",";
    out << "s,value\n";
    for (std::size_t f = 0; f < lat.node_count(); ++f) {
        const GroupPoint p = lat.point(f);
        for (int j = 0; j < lat.n; ++j) out << format_double(p.x[j]) << ",";
        for (int j = 0; j < lat.n; ++j) out << format_double(p.y[j]) << ",";
        out << format_double(p.s) << "," << format_double(values[f]) << "\n";
    }
}

void write_profile_csv(const std::string& path, const RadialProfile& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    out << "r,s,re,im\n";
    for (int i = 0; i < f.Nr; ++i)
        for (int j = 0; j < f.Ns; ++j)
            out << format_double(f.r(i)) << "," << format_double(f.s(j)) << ","
                << format_double(f.at(i, j).real()) << "," << format_double(f.at(i, j).imag())
                << "\n";
}

void write_coefficients_csv(const std::string& path, const SpectralCoefficients& c) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    out << "lambda,k,re,im\n";
    for (std::size_t node = 0; node < c.grid.node_count(); ++node)
        for (int k = 0; k <= c.grid.K_max; ++k)
            out << format_double(c.grid.lambdas[node]) << "," << k << ","
                << format_double(c.at(node, k).real()) << "," << format_double(c.at(node, k).imag())
                << "\n";
}

}  // namespace heisen
