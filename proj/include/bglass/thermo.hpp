#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bglass/constants.hpp"
#include "bglass/detail/parallel.hpp"
#include "bglass/errors.hpp"
#include "bglass/localization.hpp"
#include "bglass/root_finding.hpp"

// Finite-temperature 2D localized Bose gas:
//   1 - n_c/n      = Lambda_cr^2 / Lambda^2
//   n Lambda_cr^2  = ln(2 L_c^2 / Lambda_cr^2)
//   L_c            = alpha (n_g - u n_c)^beta
// in dimensionless form (densities per 1/L0^2, lengths per L0). The whole
// system collapses to one bracketed scalar root in n_c.

namespace bglass {

// Thermal de Broglie wavelength, meters.
inline double thermal_wavelength(double temperature_K, double mass_kg) {
    if (!(temperature_K > 0.0) || !(mass_kg > 0.0))
        throw std::domain_error("thermal_wavelength: need T > 0 and M > 0");
    return std::sqrt(2.0 * constants::pi * constants::hbar * constants::hbar /
                     (mass_kg * constants::boltzmann * temperature_K));
}

namespace detail {

// Root of n y + ln y = log_2lc2 in y = Lambda_cr^2; the left side is
// strictly increasing, so the root is unique and lives in (0, exp(log_2lc2)].
// Solved in t = ln y, which stays well-scaled even when 2 L_c^2 overflows
// any fixed linear bracket (L_c grows like exp deep below the onset).
inline double lambda_cr_squared(double n, double log_2lc2) {
    if (n == 0.0) return std::exp(log_2lc2);
    auto mismatch = [&](double t) { return n * std::exp(t) + t - log_2lc2; };
    const double t_hi = log_2lc2; // f(t_hi) = n y >= 0
    double t_lo = std::min(t_hi - 1.0, 0.0);
    for (int i = 0; i < 60 && mismatch(t_lo) > 0.0; ++i)
        t_lo = std::max(t_lo - (mismatch(t_lo) + 1.0), -745.0);
    const Bracket bracket{t_lo, t_hi, mismatch(t_lo), mismatch(t_hi)};
    RootOptions root_options;
    root_options.max_iterations = 400;
    return std::exp(find_root_bracketed(mismatch, bracket, 1e-14, root_options));
}

} // namespace detail

// Critical de Broglie wavelength for density n and localization size L_c
// (both dimensionless).
inline double solve_lambda_cr(double n, double L_c) {
    if (!(n >= 0.0) || !(L_c > 0.0))
        throw std::domain_error("solve_lambda_cr: need n >= 0 and L_c > 0");
    return std::sqrt(detail::lambda_cr_squared(n, std::log(2.0) + 2.0 * std::log(L_c)));
}

struct ThermoInput {
    double n = 0.0;           // total density, units 1/L0^2
    double T = 0.0;           // kelvin
    double u = 0.0;           // interaction strength
    FitParams fit{};          // critical-curve coefficients
    double M = 0.0;           // boson mass, kg
    double L0 = 0.0;          // disorder length scale, meters
};

inline void validate_thermo_input(const ThermoInput& input) {
    if (!(input.n > 0.0) || !(input.T > 0.0) || !(input.u > 0.0) || !(input.M > 0.0) ||
        !(input.L0 > 0.0))
        throw std::invalid_argument("ThermoInput: n, T, u, M, L0 must be positive");
    if (!(input.fit.alpha > 0.0) || !(input.fit.beta < 0.0) || !(input.fit.n_g > 0.0))
        throw std::invalid_argument("ThermoInput: invalid fit parameters");
}

struct ThermoState {
    double T = 0.0;              // kelvin
    double lambda_m = 0.0;       // de Broglie wavelength, meters
    double lambda_cr_m = 0.0;    // critical wavelength, meters
    double n_c = 0.0;            // condensate density, dimensionless
    double fraction = 0.0;       // n_c / n
    double L_c = 0.0;            // localization length, dimensionless
    bool condensed = false;
    int root_count = 1;          // sign changes seen by the n_c scan
    double residual_sys1 = 0.0;  // relative, condensed states only
    double residual_sys2 = 0.0;
};

inline double localization_length_of(const FitParams& fit, double u_n_c) {
    // evaluated in log space; the gap n_g - u n_c can be arbitrarily small
    const double gap = fit.n_g - u_n_c;
    return std::exp(std::log(fit.alpha) + fit.beta * std::log(gap));
}

// Solve the coupled system for one (n, T) point. The scalar root is taken in
// s = ln(n_g - u n_c) rather than n_c itself: deep below the onset the
// condensed root can sit at gaps far below 1e-12 n_g (the localization
// length grows like exp at fixed density), which no guard band on n_c can
// resolve. If several roots appear on the 512-point scan, the largest-n_c
// one is taken (the condensed branch) and the multiplicity is recorded.
inline ThermoState solve_thermo_state(const ThermoInput& input) {
    validate_thermo_input(input);
    ThermoState state;
    state.T = input.T;
    state.lambda_m = thermal_wavelength(input.T, input.M);
    const double lambda = state.lambda_m / input.L0; // dimensionless
    const double lambda2 = lambda * lambda;

    auto lambda_cr2_at_log_gap = [&](double s) {
        const double log_lc = std::log(input.fit.alpha) + input.fit.beta * s;
        return detail::lambda_cr_squared(input.n, std::log(2.0) + 2.0 * log_lc);
    };
    auto n_c_of = [&](double s) {
        return std::min((input.fit.n_g - std::exp(s)) / input.u,
                        std::nextafter(input.fit.n_g / input.u, 0.0));
    };

    const double s_onset = std::log(input.fit.n_g); // n_c = 0
    const double lambda_cr2_onset = lambda_cr2_at_log_gap(s_onset);
    if (!(lambda2 > lambda_cr2_onset)) {
        state.condensed = false;
        state.n_c = 0.0;
        state.fraction = 0.0;
        state.L_c = localization_length_of(input.fit, 0.0);
        state.lambda_cr_m = std::sqrt(lambda_cr2_onset) * input.L0;
        return state;
    }

    // admissible gap range: n_c in [0, min(n, n_g/u))
    const double gap_floor =
        input.n * input.u < input.fit.n_g ? input.fit.n_g - input.u * input.n : 0.0;
    const double s_lo = std::max(std::log(std::max(gap_floor, 1e-300)), -690.0);
    const double s_hi = s_onset - 1e-12;
    auto mismatch = [&](double s) {
        return n_c_of(s) - input.n * (1.0 - lambda_cr2_at_log_gap(s) / lambda2);
    };

    // scan for sign changes; the smallest-s bracket is the largest n_c
    const int scan_points = 512;
    int sign_changes = 0;
    double bracket_lo = s_lo, bracket_hi = s_hi, bracket_flo = 0.0, bracket_fhi = 0.0;
    bool have_bracket = false;
    double prev_s = s_lo, prev_f = mismatch(s_lo);
    for (int i = 1; i <= scan_points; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / scan_points;
        const double f = mismatch(s);
        if (prev_f * f <= 0.0 && !(prev_f == 0.0 && f == 0.0)) {
            ++sign_changes;
            if (!have_bracket) { // first bracket = largest n_c
                bracket_lo = prev_s;
                bracket_hi = s;
                bracket_flo = prev_f;
                bracket_fhi = f;
                have_bracket = true;
            }
        }
        prev_s = s;
        prev_f = f;
    }
    double s_root;
    if (!have_bracket) {
        // immediately below the onset the root sits inside the 1e-12 slab
        // next to n_c = 0 that the scan excludes; the s_hi state represents
        // it to the slab width
        if (!(mismatch(s_hi) >= 0.0))
            throw ConvergenceError("solve_thermo_state: no bracket for the condensed root",
                                   mismatch(s_hi));
        s_root = s_hi;
    } else {
        const Bracket bracket{bracket_lo, bracket_hi, bracket_flo, bracket_fhi};
        RootOptions root_options;
        root_options.max_iterations = 300;
        s_root = find_root_bracketed(mismatch, bracket, 1e-14, root_options);
    }
    state.root_count = std::max(sign_changes, 1);

    const double n_c = n_c_of(s_root);
    state.n_c = n_c;
    state.fraction = n_c / input.n;
    state.L_c = std::exp(std::log(input.fit.alpha) + input.fit.beta * s_root);
    const double lcr2 = lambda_cr2_at_log_gap(s_root);
    state.lambda_cr_m = std::sqrt(lcr2) * input.L0;
    state.condensed = true;
    state.residual_sys1 = std::abs(n_c - input.n * (1.0 - lcr2 / lambda2)) / input.n;
    state.residual_sys2 = std::abs(input.n * lcr2 - std::log(2.0 * state.L_c * state.L_c / lcr2)) /
                          std::max(1.0, std::abs(input.n * lcr2));
    return state;
}

// Onset temperature: Lambda(T_c) = Lambda_cr(n, L_c(n_c -> 0+)).
inline double condensation_temperature(double n, double u, const FitParams& fit, double M,
                                       double L0) {
    if (!(n > 0.0) || !(u > 0.0) || !(M > 0.0) || !(L0 > 0.0))
        throw std::domain_error("condensation_temperature: positive inputs required");
    const double L_c0 = localization_length_of(fit, 0.0);
    const double lambda_cr = solve_lambda_cr(n, L_c0) * L0; // meters
    return 2.0 * constants::pi * constants::hbar * constants::hbar /
           (M * constants::boltzmann * lambda_cr * lambda_cr);
}

struct ThermoSweepOptions {
    int workers = 1;
};

struct ThermoPoint {
    ThermoState state{};
    bool ok = false;
    std::string error;
};

// One state per temperature; per-point failures are recorded and the sweep
// continues.
inline std::vector<ThermoPoint> thermo_sweep(double n, double u, const FitParams& fit,
                                             double M, double L0,
                                             const std::vector<double>& temperatures,
                                             const ThermoSweepOptions& options = {}) {
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
        if (!(temperatures[i] > 0.0))
            throw std::invalid_argument("thermo_sweep: temperatures must be positive");
        if (i > 0 && !(temperatures[i] > temperatures[i - 1]))
            throw std::invalid_argument("thermo_sweep: temperatures must be sorted");
    }
    std::vector<ThermoPoint> points(temperatures.size());
    detail::parallel_for(temperatures.size(), options.workers, [&](std::size_t i) {
        ThermoInput input;
        input.n = n;
        input.T = temperatures[i];
        input.u = u;
        input.fit = fit;
        input.M = M;
        input.L0 = L0;
        try {
            points[i].state = solve_thermo_state(input);
            points[i].ok = true;
        } catch (const std::exception& error) {
            points[i].ok = false;
            points[i].error = error.what();
            points[i].state.T = temperatures[i];
        }
    });
    return points;
}

} // namespace bglass
