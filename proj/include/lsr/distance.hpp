#pragma once

#include <cstdint>
#include <vector>

#include "lsr/cloud.hpp"
#include "lsr/grid.hpp"

namespace lsr {

/// Unsigned distance to the cloud: exact at seeded nodes near the points,
/// swept (Godunov eikonal) elsewhere. Unseeded/unswept nodes hold a finite
/// sentinel of 10x the grid diagonal.
struct DistanceField {
    ScalarField field;
    std::vector<std::uint8_t> exact;  // 1 where the value is the exact cloud distance
    double sentinel = 0.0;
};

// Exact distances on the 4-per-axis node block around each cloud point
// (the enclosing cell's corners extended one node outward per side).
DistanceField seed_exact_distance(const Grid& grid, const PointCloud& cloud);

// Gauss-Seidel sweeps over all 2^dim axis orderings until the largest node
// change drops below 1e-3*dx, or 8 rounds. Values only decrease; exact
// nodes are never modified. Returns the number of rounds performed.
int fast_sweep(DistanceField& d);

DistanceField build_distance_field(const Grid& grid, const PointCloud& cloud);

}  // namespace lsr
