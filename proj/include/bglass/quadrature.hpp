#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "bglass/constants.hpp"
#include "bglass/errors.hpp"
#include "bglass/radial_grid.hpp"

namespace bglass {

namespace detail {

// Exact integral over [a,b] of the parabola through (x0,y0),(x1,y1),(x2,y2),
// Newton form in panel-local coordinates to keep round-off proportional to
// the panel size even for rough data.
inline double parabola_integral(double x0, double y0, double x1, double y1,
                                double x2, double y2, double a, double b) {
    const double c1 = (y1 - y0) / (x1 - x0);
    const double c2 = ((y2 - y1) / (x2 - x1) - c1) / (x2 - x0);
    const double s1 = x1 - x0;
    const double sa = a - x0;
    const double sb = b - x0;
    const double lin = 0.5 * (sb * sb - sa * sa);
    const double cub = (sb * sb * sb - sa * sa * sa) / 3.0;
    return y0 * (sb - sa) + c1 * lin + c2 * (cub - s1 * lin);
}

} // namespace detail

// Integral of f over the plane assuming axial symmetry:
//   integral f(r) 2 pi r dr on [0, r_max],
// by composite parabolic segments on the sampled values (second order on
// arbitrary grids, fourth order on smooth uniform data).
inline double integrate_radial_2d(const RadialGrid& grid, std::span<const double> values) {
    if (values.size() != grid.node_count())
        throw std::invalid_argument("integrate_radial_2d: value/grid length mismatch");
    validate_grid(grid);

    const auto& r = grid.r;
    const std::size_t n = r.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = 2.0 * constants::pi * r[i] * values[i];

    double total = 0.0;
    std::size_t i = 0;
    while (i + 2 < n) {
        total += detail::parabola_integral(r[i], g[i], r[i + 1], g[i + 1],
                                           r[i + 2], g[i + 2], r[i], r[i + 2]);
        i += 2;
    }
    if (i + 2 == n) { // odd interval count: last interval from the trailing parabola
        total += detail::parabola_integral(r[n - 3], g[n - 3], r[n - 2], g[n - 2],
                                           r[n - 1], g[n - 1], r[n - 2], r[n - 1]);
    }
    return total;
}

struct QuadratureOptions {
    long max_panels = 500000; // subdivision budget
};

// Adaptive Simpson with Richardson correction on [a,b]; the local acceptance
// threshold scales with panel length so the accepted panels sum to an
// estimated absolute error <= tol.
template <class F>
double adaptive_quadrature(F&& integrand, double a, double b, double tol,
                           const QuadratureOptions& options = {}) {
    if (!(a < b))
        throw std::invalid_argument("adaptive_quadrature: need a < b");
    if (!(tol > 0.0))
        throw std::invalid_argument("adaptive_quadrature: need tol > 0");

    struct Panel {
        double a, b, fa, fm, fb, simpson;
    };

    auto simpson = [](double h, double fa, double fm, double fb) {
        return h / 6.0 * (fa + 4.0 * fm + fb);
    };
    auto eval = [&](double x) {
        const double y = integrand(x);
        if (!std::isfinite(y))
            throw std::domain_error("adaptive_quadrature: integrand not finite");
        return y;
    };

    const double span = b - a;
    const double fa = eval(a);
    const double fm = eval(0.5 * (a + b));
    const double fb = eval(b);

    std::vector<Panel> stack;
    stack.push_back({a, b, fa, fm, fb, simpson(span, fa, fm, fb)});

    double total = 0.0;
    long panels_used = 0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();

        const double m = 0.5 * (p.a + p.b);
        const double lm = 0.5 * (p.a + m);
        const double rm = 0.5 * (m + p.b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double s_left = simpson(m - p.a, p.fa, flm, p.fm);
        const double s_right = simpson(p.b - m, p.fm, frm, p.fb);
        const double s2 = s_left + s_right;
        const double err = (s2 - p.simpson) / 15.0;

        if (std::abs(err) <= tol * ((p.b - p.a) / span) || (p.b - p.a) < 1e-14 * span) {
            total += s2 + err;
            continue;
        }
        if (++panels_used > options.max_panels) {
            double best = total + s2;
            for (const Panel& q : stack) best += q.simpson;
            throw QuadratureError("adaptive_quadrature: subdivision budget exhausted", best);
        }
        stack.push_back({m, p.b, p.fm, frm, p.fb, s_right});
        stack.push_back({p.a, m, p.fa, flm, p.fm, s_left});
    }
    return total;
}

} // namespace bglass
