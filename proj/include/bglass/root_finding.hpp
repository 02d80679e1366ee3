#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace bglass {

// Sign-change interval with cached endpoint values.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

inline void validate_bracket(const Bracket& bracket) {
    if (!std::isfinite(bracket.lo) || !std::isfinite(bracket.hi) ||
        !std::isfinite(bracket.f_lo) || !std::isfinite(bracket.f_hi))
        throw std::invalid_argument("Bracket: non-finite endpoint");
    if (bracket.lo == bracket.hi)
        throw std::invalid_argument("Bracket: degenerate interval");
    if (bracket.f_lo * bracket.f_hi > 0.0)
        throw std::invalid_argument("Bracket: endpoints do not straddle a sign change");
}

template <class F>
Bracket make_bracket(F&& function, double lo, double hi) {
    Bracket bracket{lo, hi, function(lo), function(hi)};
    validate_bracket(bracket);
    return bracket;
}

struct RootOptions {
    double f_tol = 0.0;  // optional early-out on |f|
    int max_iterations = 240;
};

// Bracketed scalar root: secant steps while they shrink the interval
// properly, bisection otherwise, so convergence is guaranteed. The bracket is
// normalized first, which makes the result exactly invariant under swapping
// the endpoints.
template <class F>
double find_root_bracketed(F&& function, Bracket bracket, double x_tol,
                           const RootOptions& options = {}) {
    validate_bracket(bracket);
    if (!(x_tol >= 0.0))
        throw std::invalid_argument("find_root_bracketed: negative tolerance");

    double a = bracket.lo, b = bracket.hi, fa = bracket.f_lo, fb = bracket.f_hi;
    if (a > b) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;

    double best_x = std::abs(fa) <= std::abs(fb) ? a : b;
    double best_f = std::abs(fa) <= std::abs(fb) ? std::abs(fa) : std::abs(fb);

    for (int it = 0; it < options.max_iterations; ++it) {
        const double width = b - a;
        if (width <= x_tol || width <= 4.0 * std::numeric_limits<double>::epsilon() *
                                           (std::abs(a) + std::abs(b)))
            break;

        double x = a - fa * width / (fb - fa); // secant through the bracket
        const double margin = 0.01 * width;
        if (!(x > a + margin) || !(x < b - margin))
            x = a + 0.5 * width;

        const double fx = function(x);
        if (!std::isfinite(fx))
            throw std::domain_error("find_root_bracketed: non-finite function value");
        if (std::abs(fx) < best_f) {
            best_f = std::abs(fx);
            best_x = x;
        }
        if (fx == 0.0 || std::abs(fx) <= options.f_tol) return x;

        if (fa * fx < 0.0) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    return best_f <= std::min(std::abs(fa), std::abs(fb)) ? best_x
           : (std::abs(fa) <= std::abs(fb) ? a : b);
}

} // namespace bglass
