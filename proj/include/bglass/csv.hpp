#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bglass/localization.hpp"
#include "bglass/superradiance.hpp"
#include "bglass/thermo.hpp"

// CSV export with a pinned dialect: comma separator, '.' decimal point,
// header row, LF line endings, doubles printed with %.17g. Bit-stable so
// repeated runs compare equal byte for byte.

namespace bglass::csv {

inline std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

inline std::ofstream open_csv(const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

struct MuOfLRow {
    double L = 0.0;
    double mu0 = 0.0;
    double L_c = 0.0;
    bool localized = false;
};

inline void write_mu_of_l(const std::string& path, std::span<const MuOfLRow> rows) {
    auto file = open_csv(path);
    file << "L,mu0,L_c,localized\n";
    for (const auto& row : rows)
        file << format_double(row.L) << ',' << format_double(row.mu0) << ','
             << format_double(row.L_c) << ',' << (row.localized ? 1 : 0) << '\n';
}

inline void write_curve(const std::string& path, const LocalizationCurve& curve) {
    auto file = open_csv(path);
    file << "n_c,L_c,L_star,mu0_star,localized_flag\n";
    for (const auto& point : curve.points)
        file << format_double(point.n_c) << ',' << format_double(point.L_c) << ','
             << format_double(point.L_star) << ',' << format_double(point.mu0_star) << ','
             << (point.localized ? 1 : 0) << '\n';
}

inline void write_fit(const std::string& path, const FitParams& fit) {
    auto file = open_csv(path);
    file << "alpha,beta,n_g,rms\n";
    file << format_double(fit.alpha) << ',' << format_double(fit.beta) << ','
         << format_double(fit.n_g) << ',' << format_double(fit.rms_residual) << '\n';
}

// Thermo table; the enhancement column is optional because it needs the
// emission configuration on top of the thermo solution.
inline void write_thermo(const std::string& path, std::span<const ThermoPoint> points,
                         double L0, const std::vector<double>* enhancement = nullptr) {
    auto file = open_csv(path);
    file << "T_K,lambda_m,lambda_cr_m,n_c_dimless,fraction,L_c_dimless,L_c_um,condensed";
    if (enhancement) file << ",enhancement";
    file << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        const ThermoState& s = points[i].state;
        file << format_double(s.T) << ',' << format_double(s.lambda_m) << ','
             << format_double(s.lambda_cr_m) << ',' << format_double(s.n_c) << ','
             << format_double(s.fraction) << ',' << format_double(s.L_c) << ','
             << format_double(s.L_c * L0 * 1e6) << ',' << (s.condensed ? 1 : 0);
        if (enhancement) file << ',' << format_double((*enhancement)[i]);
        file << '\n';
    }
}

inline void write_pattern(const std::string& path, std::span<const PatternSample> samples) {
    auto file = open_csv(path);
    file << "phi_rad,chi_rad,intensity\n";
    for (const auto& sample : samples)
        file << format_double(sample.phi) << ',' << format_double(sample.chi) << ','
             << format_double(sample.intensity) << '\n';
}

inline void write_emission_report(const std::string& path, const EmissionReport& report) {
    auto file = open_csv(path);
    file << "a_c_m,N_e,mu_c_as_printed,mu_c_limit_consistent,enhancement\n";
    file << format_double(report.a_c_m) << ',' << format_double(report.N_e) << ','
         << format_double(report.mu_c_as_printed) << ','
         << format_double(report.mu_c_limit_consistent) << ','
         << format_double(report.enhancement) << '\n';
}

// Minimal reader for our own dialect (used by the fit subcommand).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open input file: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (first) {
            table.header = cells;
            first = false;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            std::size_t used = 0;
            row.push_back(std::stod(cell, &used));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::uint64_t fnv1a_hash(std::span<const char> bytes) {
    std::uint64_t hash = 1469598103934665603ull;
    for (char byte : bytes) {
        hash ^= static_cast<unsigned char>(byte);
        hash *= 1099511628211ull;
    }
    return hash;
}

} // namespace bglass::csv
