#include "lsr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lsr {

Grid build_grid(const Vec& bbox_min, const Vec& bbox_max, int dim, double dx, int pad_cells,
                std::int64_t node_budget) {
    if (dim != 2 && dim != 3) throw ConfigError("build_grid: dim must be 2 or 3");
    if (!(dx > 0.0)) throw ConfigError("build_grid: dx must be positive");
    if (pad_cells < 2) throw ConfigError("build_grid: pad_cells must be >= 2");
    for (int d = 0; d < dim; ++d)
        if (!(bbox_min[d] < bbox_max[d]))
            throw ConfigError("build_grid: bbox_min must be < bbox_max componentwise");

    Grid g;
    g.dim = dim;
    g.dx = dx;
    std::int64_t total = 1;
    for (int d = 0; d < 3; ++d) {
        if (d >= dim) {
            g.origin[d] = 0.0;
            g.dims[d] = 1;
            continue;
        }
        g.origin[d] = bbox_min[d] - pad_cells * dx;
        const double span = bbox_max[d] + pad_cells * dx - g.origin[d];
        g.dims[d] = 1 + static_cast<int>(std::ceil(span / dx - 1e-9));
        total *= g.dims[d];
        if (total > node_budget)
            throw Error("build_grid: " + std::to_string(total) + "+ nodes exceed budget " +
                        std::to_string(node_budget));
    }
    return g;
}

Index3 locate_cell(const Grid& g, const Vec& p) {
    if (!g.contains(p)) throw OutOfDomainError("locate_cell: point outside grid hull");
    Index3 c{0, 0, 0};
    for (int d = 0; d < g.dim; ++d) {
        const int cd = static_cast<int>(std::floor((p[d] - g.origin[d]) / g.dx));
        c[d] = std::clamp(cd, 0, g.dims[d] - 2);
    }
    return c;
}

BandParams default_band_params(int dim, double dx) {
    return dim == 2 ? BandParams{4.0 * dx, 2.0 * dx} : BandParams{6.0 * dx, 3.0 * dx};
}

Vec centered_gradient(const ScalarField& f, int i, int j, int k) {
    const Grid& g = f.grid;
    const double inv2 = 1.0 / (2.0 * g.dx);
    const double inv1 = 1.0 / g.dx;
    Vec grad{0, 0, 0};
    const int id[3] = {i, j, k};
    for (int d = 0; d < g.dim; ++d) {
        int lo[3] = {i, j, k}, hi[3] = {i, j, k};
        if (id[d] == 0) {
            hi[d] = 1;
            grad[d] = (f.at(hi[0], hi[1], hi[2]) - f.at(i, j, k)) * inv1;
        } else if (id[d] == g.dims[d] - 1) {
            lo[d] = g.dims[d] - 2;
            grad[d] = (f.at(i, j, k) - f.at(lo[0], lo[1], lo[2])) * inv1;
        } else {
            lo[d] -= 1;
            hi[d] += 1;
            grad[d] = (f.at(hi[0], hi[1], hi[2]) - f.at(lo[0], lo[1], lo[2])) * inv2;
        }
    }
    return grad;
}

BandMask narrow_band(const ScalarField& phi, double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("narrow_band: gamma must be positive");
    const Grid& g = phi.grid;
    const std::int64_t n = g.num_nodes();

    BandMask mask;
    mask.grid = g;
    mask.state.assign(static_cast<std::size_t>(n), NodeState::Inactive);

#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < n; ++id)
        if (std::abs(phi.values[static_cast<std::size_t>(id)]) < gamma)
            mask.state[static_cast<std::size_t>(id)] = NodeState::Active;

    // Halo pass reads only Active states and writes only to Inactive nodes,
    // so running it in place is race-free.
    const int kz = g.dim == 3 ? 1 : 0;
#pragma omp parallel for collapse(2) schedule(static)
    for (int k = 0; k < g.dims[2]; ++k) {
        for (int j = 0; j < g.dims[1]; ++j) {
            for (int i = 0; i < g.dims[0]; ++i) {
                const std::int64_t id = g.index(i, j, k);
                if (mask.state[static_cast<std::size_t>(id)] != NodeState::Inactive) continue;
                bool near_active = false;
                for (int dk = -kz; dk <= kz && !near_active; ++dk) {
                    for (int dj = -1; dj <= 1 && !near_active; ++dj) {
                        for (int di = -1; di <= 1 && !near_active; ++di) {
                            const int ni = i + di, nj = j + dj, nk = k + dk;
                            if (ni < 0 || nj < 0 || nk < 0 || ni >= g.dims[0] ||
                                nj >= g.dims[1] || nk >= g.dims[2])
                                continue;
                            near_active =
                                mask.state[static_cast<std::size_t>(g.index(ni, nj, nk))] ==
                                NodeState::Active;
                        }
                    }
                }
                if (near_active) mask.state[static_cast<std::size_t>(id)] = NodeState::ReinitHalo;
            }
        }
    }

    for (std::int64_t id = 0; id < n; ++id) {
        const NodeState s = mask.state[static_cast<std::size_t>(id)];
        if (s == NodeState::Active) mask.active.push_back(id);
        if (s != NodeState::Inactive) mask.tube.push_back(id);
    }
    return mask;
}

void clamp_field(ScalarField& f, double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("clamp_field: gamma must be positive");
    const std::int64_t n = f.grid.num_nodes();
#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < n; ++id) {
        double& v = f.values[static_cast<std::size_t>(id)];
        v = std::min(std::max(v, -gamma), gamma);
    }
}

double cutoff_weight(double phi, const BandParams& params) {
    params.validate();
    const double a = std::abs(phi);
    if (a <= params.beta) return 1.0;
    if (a > params.gamma) return 0.0;
    const double g = params.gamma, b = params.beta;
    return sqr(a - g) * (2.0 * a + g - 3.0 * b) / ((g - b) * (g - b) * (g - b));
}

}  // namespace lsr
