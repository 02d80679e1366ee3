#pragma once

// Physical constants (CODATA 2018). Single source of truth for every module;
// do not redefine these elsewhere.

namespace bglass::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double boltzmann = 1.380649e-23;      // J / K (exact)
inline constexpr double electron_mass = 9.1093837015e-31; // kg

} // namespace bglass::constants
