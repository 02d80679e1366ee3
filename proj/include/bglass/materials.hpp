#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bglass/constants.hpp"

// Physical-units layer: exciton parameters, the disorder length scale, and
// conversions between SI and dimensionless quantities.

namespace bglass {

struct ExcitonMaterial {
    std::string name;
    double m_e = 0.0; // units of the free-electron mass
    double m_h = 0.0;
    double a0 = 0.0;  // 2D exciton Bohr radius, meters
    double E0 = 0.0;  // 2D exciton binding energy, joules

    double total_mass() const { return m_e + m_h; }                  // units of m0
    double reduced_mass() const { return m_e * m_h / (m_e + m_h); }  // units of m0
    double total_mass_kg() const { return total_mass() * constants::electron_mass; }
};

inline void validate_material(const ExcitonMaterial& material) {
    if (!(material.m_e > 0.0) || !(material.m_h > 0.0) || !(material.a0 > 0.0) ||
        !(material.E0 > 0.0))
        throw std::invalid_argument("ExcitonMaterial: all parameters must be positive");
}

// GaAs quantum-well preset. Carrier masses are the standard values; the 2D
// Bohr radius and binding energy are placeholder estimates (half the bulk
// radius, four times the bulk 4.2 meV) and only feed the exchange-integral
// and emission defaults, not the dimensionless solvers.
inline ExcitonMaterial gaas() {
    ExcitonMaterial material;
    material.name = "GaAs";
    material.m_e = 0.0665;
    material.m_h = 0.377;
    material.a0 = 5.6e-9;
    material.E0 = 16.8e-3 * 1.602176634e-19;
    return material;
}

// Coulomb exchange integral of the 1s exciton gas,
//   I = 4 pi a0^2 (1 - 315 pi^2 / 4096) E0.
inline double exchange_integral(double a0, double E0) {
    if (!(a0 > 0.0) || !(E0 > 0.0))
        throw std::domain_error("exchange_integral: positive inputs required");
    const double pi2 = constants::pi * constants::pi;
    return 4.0 * constants::pi * a0 * a0 * (1.0 - 315.0 * pi2 / 4096.0) * E0;
}

// Dimensionless interaction strength u = 6.06 M / m_r = 6.06 (m_e+m_h)^2/(m_e m_h).
inline double u_from_masses(double m_e, double m_h) {
    if (!(m_e > 0.0) || !(m_h > 0.0))
        throw std::domain_error("u_from_masses: positive masses required");
    const double total = m_e + m_h;
    return 6.06 * total * total / (m_e * m_h);
}

// Disorder length scale L0 = hbar^2 / (2 M xi). The well depth is xi/L, so
// xi carries units of J*m.
inline double length_scale_from_disorder(double xi, double mass_kg) {
    if (!(xi > 0.0) || !(mass_kg > 0.0))
        throw std::domain_error("length_scale_from_disorder: positive inputs required");
    return constants::hbar * constants::hbar / (2.0 * mass_kg * xi);
}

inline double disorder_from_length_scale(double L0, double mass_kg) {
    if (!(L0 > 0.0) || !(mass_kg > 0.0))
        throw std::domain_error("disorder_from_length_scale: positive inputs required");
    return constants::hbar * constants::hbar / (2.0 * mass_kg * L0);
}

struct DisorderScale {
    double xi = 0.0; // J*m
    double L0 = 0.0; // m
};

inline DisorderScale disorder_scale_from_length(double L0, double mass_kg) {
    return DisorderScale{disorder_from_length_scale(L0, mass_kg), L0};
}

// n_SI in 1/m^2 -> dimensionless density per 1/L0^2.
inline double density_to_dimensionless(double n_si, double L0) {
    if (!(n_si >= 0.0) || !(L0 > 0.0))
        throw std::domain_error("density_to_dimensionless: bad inputs");
    return n_si * L0 * L0;
}

inline double density_from_dimensionless(double n, double L0) {
    if (!(n >= 0.0) || !(L0 > 0.0))
        throw std::domain_error("density_from_dimensionless: bad inputs");
    return n / (L0 * L0);
}

// Healing length l_h = 2 / sqrt(u n_c), dimensionless.
inline double healing_length(double u, double n_c) {
    if (!(u > 0.0) || !(n_c > 0.0))
        throw std::domain_error("healing_length: positive inputs required");
    return 2.0 / std::sqrt(u * n_c);
}

// Key-value preset file: lines of "key = value", '#' comments.
// Keys: name, m_e, m_h, a0_m, E0_J.
inline ExcitonMaterial load_material(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("load_material: cannot open " + path);
    std::map<std::string, std::string> entries;
    std::string line;
    while (std::getline(file, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto number = [&](const std::string& key) {
        const auto it = entries.find(key);
        if (it == entries.end())
            throw std::runtime_error("load_material: missing key '" + key + "' in " + path);
        std::size_t used = 0;
        const double value = std::stod(it->second, &used);
        if (used != it->second.size())
            throw std::runtime_error("load_material: bad number for '" + key + "'");
        return value;
    };
    ExcitonMaterial material;
    material.name = entries.count("name") ? entries["name"] : "custom";
    material.m_e = number("m_e");
    material.m_h = number("m_h");
    material.a0 = number("a0_m");
    material.E0 = number("E0_J");
    validate_material(material);
    return material;
}

} // namespace bglass
