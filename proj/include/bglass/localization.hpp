#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bglass/detail/parallel.hpp"
#include "bglass/errors.hpp"
#include "bglass/gp.hpp"

// Localization analysis: the optimal well radius minimizing the chemical
// potential, the localization-length/density curve, and the critical
// power-law fit L_c = alpha (n_g - n)^beta.

namespace bglass {

struct OptimalLake {
    double L_star = 0.0;   // minimizing well radius
    double mu0_star = 0.0; // minimal chemical potential (negative)
    double L_c = 0.0;      // coherence length at the minimum
    GpSolution solution;
};

struct CurvePoint {
    double n_c = 0.0;
    bool localized = false;
    double L_c = 0.0;
    double L_star = 0.0;
    double mu0_star = 0.0;
    std::string note; // failure reason for unlocalized points
};

struct LocalizationCurve {
    double u = 0.0;
    std::vector<CurvePoint> points;
};

struct FitParams {
    double alpha = 0.0;
    double beta = 0.0; // negative
    double n_g = 0.0;  // critical dimensionless density
    double rms_residual = 0.0; // in log space
};

struct ScanOptions {
    double l_min = 0.5;
    double l_max = 40.0;
    int coarse_count = 80;
    double refine_rel_tol = 1e-4;    // relative tolerance on L*
    long probe_max_iterations = 20000; // per-probe relaxation cap during scans
    SolverOptions solver{};
};

// Coarse scan of mu0(L), then golden-section refinement around the best
// point. Scan points that fail to converge are skipped as candidates; the
// whole call fails with NoLocalizedSolution only if no scanned radius binds.
inline OptimalLake minimize_mu_over_L(double u, double n_c, const ScanOptions& options = {}) {
    if (!(u >= 0.0) || !(n_c > 0.0))
        throw std::invalid_argument("minimize_mu_over_L: need u >= 0 and n_c > 0");
    if (!(options.l_min > 0.0) || !(options.l_max > options.l_min) || options.coarse_count < 3)
        throw std::invalid_argument("minimize_mu_over_L: bad scan range");

    auto solve_at = [&](double L, const GpSolution* warm) {
        GpProblem problem;
        problem.u = u;
        problem.n_c = n_c;
        problem.L = L;
        problem.options = options.solver;
        problem.options.max_iterations =
            std::min(problem.options.max_iterations, options.probe_max_iterations);
        return warm ? solve_gp(problem, *warm) : solve_gp(problem);
    };

    std::vector<double> radii(options.coarse_count);
    for (int i = 0; i < options.coarse_count; ++i)
        radii[i] = options.l_min +
                   (options.l_max - options.l_min) * i / (options.coarse_count - 1);

    GpSolution best;
    int best_index = -1;
    GpSolution last_localized;
    bool have_warm = false;
    for (int i = 0; i < options.coarse_count; ++i) {
        GpSolution current;
        try {
            current = solve_at(radii[i], have_warm ? &last_localized : nullptr);
        } catch (const ConvergenceError&) {
            continue;
        }
        if (!is_localized(current)) continue;
        last_localized = current;
        have_warm = true;
        if (best_index < 0 || current.mu0 < best.mu0) {
            best = current;
            best_index = i;
        }
    }
    if (best_index < 0)
        throw NoLocalizedSolution("minimize_mu_over_L: no localized solution in the scanned "
                                  "radius range (density at or above threshold)",
                                  u, n_c);

    double lo = radii[std::max(0, best_index - 1)];
    double hi = radii[std::min(options.coarse_count - 1, best_index + 1)];

    // golden-section refinement; every probe is warm-started from the best
    // solution found so far
    const double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    GpSolution s1 = solve_at(x1, &best);
    if (is_localized(s1) && s1.mu0 < best.mu0) best = s1;
    GpSolution s2 = solve_at(x2, &best);
    if (is_localized(s2) && s2.mu0 < best.mu0) best = s2;
    double f1 = is_localized(s1) ? s1.mu0 : std::numeric_limits<double>::infinity();
    double f2 = is_localized(s2) ? s2.mu0 : std::numeric_limits<double>::infinity();
    const double tol = options.refine_rel_tol * std::max(1.0, best.L);
    for (int it = 0; it < 80 && (hi - lo) > tol; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            s1 = solve_at(x1, &best);
            f1 = is_localized(s1) ? s1.mu0 : std::numeric_limits<double>::infinity();
            if (is_localized(s1) && s1.mu0 < best.mu0) best = s1;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            s2 = solve_at(x2, &best);
            f2 = is_localized(s2) ? s2.mu0 : std::numeric_limits<double>::infinity();
            if (is_localized(s2) && s2.mu0 < best.mu0) best = s2;
        }
    }

    OptimalLake lake;
    lake.L_star = best.L;
    lake.mu0_star = best.mu0;
    lake.L_c = best.coherence_length;
    lake.solution = std::move(best);
    return lake;
}

struct CurveOptions {
    ScanOptions scan{};
    int workers = 1;
};

// One optimal lake per density; densities that do not localize (or whose
// solves fail) are recorded with a marker instead of aborting the sweep.
inline LocalizationCurve localization_curve(double u, const std::vector<double>& densities,
                                            const CurveOptions& options = {}) {
    for (std::size_t i = 0; i < densities.size(); ++i) {
        if (!(densities[i] > 0.0))
            throw std::invalid_argument("localization_curve: densities must be positive");
        if (i > 0 && !(densities[i] > densities[i - 1]))
            throw std::invalid_argument("localization_curve: densities must be sorted");
    }
    LocalizationCurve curve;
    curve.u = u;
    curve.points.resize(densities.size());
    detail::parallel_for(densities.size(), options.workers, [&](std::size_t i) {
        CurvePoint& point = curve.points[i];
        point.n_c = densities[i];
        try {
            OptimalLake lake = minimize_mu_over_L(u, densities[i], options.scan);
            point.localized = true;
            point.L_c = lake.L_c;
            point.L_star = lake.L_star;
            point.mu0_star = lake.mu0_star;
        } catch (const NoLocalizedSolution&) {
            point.localized = false;
            point.note = "not localized";
        } catch (const ConvergenceError& error) {
            point.localized = false;
            point.note = error.what();
        }
    });
    return curve;
}

struct FitOptions {
    double span = 0.1;          // n_g searched in (n_max, n_max + span]
    double min_gap = 1e-9;      // lower edge of the n_g - n_max gap
    double golden_tol = 1e-9;   // tolerance in ln(gap)
    int coarse_points = 64;
};

namespace detail {

struct LogFit {
    double intercept = 0.0;
    double slope = 0.0;
    double sse = 0.0;
};

inline LogFit log_least_squares(const std::vector<double>& n, const std::vector<double>& y,
                                double n_g) {
    const std::size_t m = n.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(n_g - n[i]);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double det = m * sxx - sx * sx;
    LogFit fit;
    if (!(std::abs(det) > 1e-30)) {
        fit.sse = std::numeric_limits<double>::infinity();
        return fit;
    }
    fit.slope = (m * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / m;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = y[i] - fit.intercept - fit.slope * std::log(n_g - n[i]);
        fit.sse += r * r;
    }
    return fit;
}

} // namespace detail

// Least-squares fit of L_c = alpha (n_g - n)^beta over the localized points.
// Log transform makes (ln alpha, beta) a linear subproblem; the remaining
// one-dimensional search over n_g is a coarse scan plus golden section in
// ln(n_g - n_max).
inline FitParams fit_power_law(const LocalizationCurve& curve, const FitOptions& options = {}) {
    std::vector<double> n, y;
    for (const CurvePoint& point : curve.points)
        if (point.localized) {
            n.push_back(point.n_c);
            y.push_back(std::log(point.L_c));
        }
    if (n.size() < 5)
        throw FitError("fit_power_law: need at least 5 localized points");
    const auto [y_min, y_max] = std::minmax_element(y.begin(), y.end());
    if (*y_max - *y_min < 1e-12)
        throw FitError("fit_power_law: degenerate data (constant L_c)");

    const double n_max = *std::max_element(n.begin(), n.end());
    auto sse_at = [&](double ln_gap) {
        return detail::log_least_squares(n, y, n_max + std::exp(ln_gap)).sse;
    };

    const double s_lo = std::log(std::max(options.min_gap, 1e-12));
    const double s_hi = std::log(options.span);
    if (!(s_hi > s_lo)) throw std::invalid_argument("fit_power_law: bad span");

    int best_i = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    const int coarse = std::max(8, options.coarse_points);
    for (int i = 0; i < coarse; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / (coarse - 1);
        const double sse = sse_at(s);
        if (sse < best_sse) {
            best_sse = sse;
            best_i = i;
        }
    }
    double a = s_lo + (s_hi - s_lo) * std::max(0, best_i - 1) / (coarse - 1);
    double b = s_lo + (s_hi - s_lo) * std::min(coarse - 1, best_i + 1) / (coarse - 1);

    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = sse_at(x1), f2 = sse_at(x2);
    for (int it = 0; it < 200 && (b - a) > options.golden_tol; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = sse_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = sse_at(x2);
        }
    }
    const double n_g = n_max + std::exp(0.5 * (a + b));
    const detail::LogFit fit = detail::log_least_squares(n, y, n_g);
    if (!std::isfinite(fit.sse))
        throw FitError("fit_power_law: rank-deficient system");

    FitParams params;
    params.alpha = std::exp(fit.intercept);
    params.beta = fit.slope;
    params.n_g = n_g;
    params.rms_residual = std::sqrt(fit.sse / n.size());
    return params;
}

struct RescaledGp {
    double u = 0.0;
    double n_c = 0.0;
    RadialProfile profile;
};

// Exact invariance map of the dimensionless system:
//   u -> u/a, n -> a n, psi -> sqrt(a) psi,
// leaving mu0, L and L_c unchanged.
inline RescaledGp rescale_solution(double u, double n_c, const RadialProfile& profile,
                                   double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::domain_error("rescale_solution: need a > 0");
    RescaledGp out;
    out.u = u / a;
    out.n_c = a * n_c;
    out.profile = profile;
    const double scale = std::sqrt(a);
    for (double& v : out.profile.psi) v *= scale;
    return out;
}

// Density grid refined geometrically toward the expected threshold, which is
// where the localization length diverges.
inline std::vector<double> threshold_refined_densities(double lo, double hi, int count,
                                                       double threshold_hint) {
    if (!(lo > 0.0) || !(hi > lo) || !(threshold_hint > hi) || count < 2)
        throw std::invalid_argument("threshold_refined_densities: bad range");
    std::vector<double> densities(count);
    const double s_lo = std::log(threshold_hint - lo);
    const double s_hi = std::log(threshold_hint - hi);
    for (int i = 0; i < count; ++i)
        densities[i] = threshold_hint - std::exp(s_lo + (s_hi - s_lo) * i / (count - 1));
    densities.front() = lo;
    densities.back() = hi;
    return densities;
}

} // namespace bglass
