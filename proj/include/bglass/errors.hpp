#pragma once

#include <stdexcept>
#include <string>

namespace bglass {

// Iteration budget exhausted before reaching the requested tolerance.
// Carries the best residual (or mismatch) reached so the caller can decide
// whether the partial result is still usable.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : std::runtime_error(msg), residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

// Adaptive quadrature ran out of subdivisions; best_estimate is the sum of
// all accepted panels plus the unrefined remainder.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& msg, double best_estimate)
        : std::runtime_error(msg), best_estimate_(best_estimate) {}

    double best_estimate() const { return best_estimate_; }

private:
    double best_estimate_;
};

// No well radius in the scanned range yields a bound state with mu0 < 0:
// the density is at or above the delocalization threshold.
class NoLocalizedSolution : public std::runtime_error {
public:
    NoLocalizedSolution(const std::string& msg, double u, double n_c)
        : std::runtime_error(msg), u_(u), n_c_(n_c) {}

    double u() const { return u_; }
    double n_c() const { return n_c_; }

private:
    double u_;
    double n_c_;
};

// Power-law fit rejected its input (too few points, degenerate data).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bglass
