#include "lsr/distance.hpp"

#include <algorithm>
#include <cmath>

namespace lsr {

DistanceField seed_exact_distance(const Grid& grid, const PointCloud& cloud) {
    if (cloud.points.empty()) throw Error("seed_exact_distance: empty cloud");
    if (cloud.dim != grid.dim) throw ConfigError("seed_exact_distance: dimension mismatch");

    DistanceField d;
    d.sentinel = 10.0 * grid.diagonal();
    d.field = ScalarField(grid, d.sentinel);
    d.exact.assign(static_cast<std::size_t>(grid.num_nodes()), 0);

    const std::int64_t np = cloud.size();
    for (const Vec& pt : cloud.points)
        if (!grid.contains(pt))
            throw OutOfDomainError("seed_exact_distance: cloud point outside grid hull");

    // Pass 1: flag the 4^dim node block around each cloud point. Concurrent
    // writes all store 1, so the marking is order-independent.
    const int kz = grid.dim == 3 ? 1 : 0;
#pragma omp parallel for schedule(static)
    for (std::int64_t q = 0; q < np; ++q) {
        const Index3 c = locate_cell(grid, cloud.points[static_cast<std::size_t>(q)]);
        for (int dk = -kz; dk <= 2 * kz; ++dk) {
            for (int dj = -1; dj <= 2; ++dj) {
                for (int di = -1; di <= 2; ++di) {
                    const int i = c[0] + di, j = c[1] + dj, k = c[2] + dk;
                    if (i < 0 || j < 0 || k < 0 || i >= grid.dims[0] || j >= grid.dims[1] ||
                        k >= grid.dims[2])
                        continue;
                    d.exact[static_cast<std::size_t>(grid.index(i, j, k))] = 1;
                }
            }
        }
    }

    // Pass 2: exact min distance over the whole cloud at every flagged node.
    const SpatialHash hash(cloud);
    const std::int64_t n = grid.num_nodes();
#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < n; ++id) {
        if (!d.exact[static_cast<std::size_t>(id)]) continue;
        const Index3 ijk = grid.unflatten(id);
        d.field.values[static_cast<std::size_t>(id)] =
            hash.nearest_distance(grid.node(ijk[0], ijk[1], ijk[2]));
    }
    return d;
}

namespace {

// Godunov update for |grad d| = 1 from the sorted finite upwind minima a[0..m).
double eikonal_update(const double* a, int m, double h) {
    double x = a[0] + h;
    if (m >= 2 && x > a[1]) {
        x = 0.5 * (a[0] + a[1] + std::sqrt(2.0 * h * h - sqr(a[0] - a[1])));
        if (m >= 3 && x > a[2]) {
            const double s = a[0] + a[1] + a[2];
            const double s2 = sqr(a[0]) + sqr(a[1]) + sqr(a[2]);
            x = (s + std::sqrt(s * s - 3.0 * (s2 - h * h))) / 3.0;
        }
    }
    return x;
}

}  // namespace

int fast_sweep(DistanceField& d) {
    const Grid& g = d.field.grid;
    bool any_seed = false;
    for (double v : d.field.values)
        if (v < d.sentinel) {
            any_seed = true;
            break;
        }
    if (!any_seed) throw Error("fast_sweep: no finite seed value");

    const int orderings = g.dim == 3 ? 8 : 4;
    const double tol = 1e-3 * g.dx;
    const int max_rounds = 8;

    auto update_node = [&](int i, int j, int k) -> double {
        const std::int64_t id = g.index(i, j, k);
        if (d.exact[static_cast<std::size_t>(id)]) return 0.0;
        double a[3];
        int m = 0;
        const int ijk[3] = {i, j, k};
        for (int ax = 0; ax < g.dim; ++ax) {
            double best = d.sentinel;
            if (ijk[ax] > 0) {
                int lo[3] = {i, j, k};
                lo[ax] -= 1;
                best = std::min(best, d.field.at(lo[0], lo[1], lo[2]));
            }
            if (ijk[ax] < g.dims[ax] - 1) {
                int hi[3] = {i, j, k};
                hi[ax] += 1;
                best = std::min(best, d.field.at(hi[0], hi[1], hi[2]));
            }
            if (best < d.sentinel) a[m++] = best;
        }
        if (m == 0) return 0.0;
        std::sort(a, a + m);
        double& v = d.field.values[static_cast<std::size_t>(id)];
        const double candidate = eikonal_update(a, m, g.dx);
        if (candidate < v) {
            const double change = v - candidate;
            v = candidate;
            return change;
        }
        return 0.0;
    };

    int round = 0;
    for (; round < max_rounds; ++round) {
        double max_change = 0.0;
        for (int ord = 0; ord < orderings; ++ord) {
            const int si = (ord & 1) ? -1 : 1;
            const int sj = (ord & 2) ? -1 : 1;
            const int sk = (ord & 4) ? -1 : 1;
            const int i0 = si > 0 ? 0 : g.dims[0] - 1;
            const int j0 = sj > 0 ? 0 : g.dims[1] - 1;
            const int k0 = sk > 0 ? 0 : g.dims[2] - 1;
            for (int k = k0; k >= 0 && k < g.dims[2]; k += sk) {
                for (int j = j0; j >= 0 && j < g.dims[1]; j += sj) {
                    for (int i = i0; i >= 0 && i < g.dims[0]; i += si) {
                        max_change = std::max(max_change, update_node(i, j, k));
                    }
                }
            }
        }
        if (max_change < tol) {
            ++round;
            break;
        }
    }
    return round;
}

DistanceField build_distance_field(const Grid& grid, const PointCloud& cloud) {
    DistanceField d = seed_exact_distance(grid, cloud);
    fast_sweep(d);
    return d;
}

}  // namespace lsr
