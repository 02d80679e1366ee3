#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bglass {

// Radial grid for axially symmetric fields. Nodes must start at the origin
// and increase strictly; spacing may be nonuniform.
struct RadialGrid {
    std::vector<double> r;

    std::size_t node_count() const { return r.size(); }
    double r_max() const { return r.back(); }
};

inline void validate_grid(const RadialGrid& grid) {
    if (grid.r.size() < 3)
        throw std::invalid_argument("RadialGrid: need at least 3 nodes");
    if (grid.r.front() != 0.0)
        throw std::invalid_argument("RadialGrid: first node must be r = 0");
    for (std::size_t i = 1; i < grid.r.size(); ++i) {
        if (!(grid.r[i] > grid.r[i - 1]))
            throw std::invalid_argument("RadialGrid: radii must increase strictly");
        if (!std::isfinite(grid.r[i]))
            throw std::invalid_argument("RadialGrid: non-finite radius");
    }
}

inline RadialGrid make_radial_grid(std::vector<double> radii) {
    RadialGrid grid{std::move(radii)};
    validate_grid(grid);
    return grid;
}

// Uniform grid with spacing 1/nodes_per_unit; r_max is rounded up to the
// next whole step so that any integer radius (the well edge in particular)
// falls exactly on a node.
inline RadialGrid make_uniform_grid(double r_max, int nodes_per_unit) {
    if (!(r_max > 0.0) || nodes_per_unit < 8)
        throw std::invalid_argument("make_uniform_grid: bad extent or resolution");
    const auto steps = static_cast<std::size_t>(std::ceil(r_max * nodes_per_unit - 1e-9));
    RadialGrid grid;
    grid.r.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        grid.r[i] = static_cast<double>(i) / nodes_per_unit;
    return grid;
}

} // namespace bglass
