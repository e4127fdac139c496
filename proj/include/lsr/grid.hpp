#pragma once

#include <cstdint>
#include <vector>

#include "lsr/types.hpp"

namespace lsr {

struct Grid {
    int dim = 2;
    Vec origin{0, 0, 0};
    double dx = 1.0;
    Index3 dims{1, 1, 1};  // nodes per axis; dims[2] == 1 in 2d

    std::int64_t num_nodes() const {
        return static_cast<std::int64_t>(dims[0]) * dims[1] * dims[2];
    }
    std::int64_t index(int i, int j, int k) const {
        return (static_cast<std::int64_t>(k) * dims[1] + j) * dims[0] + i;
    }
    Index3 unflatten(std::int64_t id) const {
        const int i = static_cast<int>(id % dims[0]);
        const int j = static_cast<int>((id / dims[0]) % dims[1]);
        const int k = static_cast<int>(id / (static_cast<std::int64_t>(dims[0]) * dims[1]));
        return {i, j, k};
    }
    Vec node(int i, int j, int k) const {
        return {origin[0] + i * dx, origin[1] + j * dx, origin[2] + k * dx};
    }
    Vec upper() const {
        return {origin[0] + (dims[0] - 1) * dx, origin[1] + (dims[1] - 1) * dx,
                origin[2] + (dims[2] - 1) * dx};
    }
    double diagonal() const { return norm(upper() - origin); }
    bool contains(const Vec& p) const {
        const Vec hi = upper();
        for (int d = 0; d < dim; ++d)
            if (p[d] < origin[d] || p[d] > hi[d]) return false;
        return true;
    }
    Vec clamp_to_hull(const Vec& p) const {
        Vec q = p;
        const Vec hi = upper();
        for (int d = 0; d < dim; ++d) q[d] = std::min(std::max(q[d], origin[d]), hi[d]);
        if (dim == 2) q[2] = 0.0;
        return q;
    }
    bool operator==(const Grid& o) const {
        return dim == o.dim && origin == o.origin && dx == o.dx && dims == o.dims;
    }
};

inline constexpr std::int64_t kDefaultNodeBudget = std::int64_t{1} << 28;

Grid build_grid(const Vec& bbox_min, const Vec& bbox_max, int dim, double dx, int pad_cells,
                std::int64_t node_budget = kDefaultNodeBudget);

// Lower corner of the cell containing `p`; points exactly on the upper hull
// map to the last cell. Throws OutOfDomainError outside the hull.
Index3 locate_cell(const Grid& g, const Vec& p);

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double init = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.num_nodes()), init) {}

    double& at(int i, int j, int k) { return values[static_cast<std::size_t>(grid.index(i, j, k))]; }
    double at(int i, int j, int k) const {
        return values[static_cast<std::size_t>(grid.index(i, j, k))];
    }
};

enum class NodeState : unsigned char { Inactive = 0, Active = 1, ReinitHalo = 2 };

struct BandMask {
    Grid grid;
    std::vector<NodeState> state;
    std::vector<std::int64_t> active;  // ACTIVE node ids, ascending
    std::vector<std::int64_t> tube;    // ACTIVE + REINIT_HALO node ids, ascending
};

struct BandParams {
    double gamma = 0.0;  // band half-width
    double beta = 0.0;   // cutoff inner radius

    void validate() const {
        if (!(beta > 0.0) || !(beta < gamma)) throw ConfigError("band: need 0 < beta < gamma");
    }
};

// gamma = 4dx, beta = 2dx in 2d; gamma = 6dx, beta = 3dx in 3d.
BandParams default_band_params(int dim, double dx);

// Centered differences at interior nodes, one-sided first order at the hull.
Vec centered_gradient(const ScalarField& f, int i, int j, int k);

// ACTIVE where |phi| < gamma; REINIT_HALO on their non-active first
// neighbours (full 3^dim box).
BandMask narrow_band(const ScalarField& phi, double gamma);

void clamp_field(ScalarField& f, double gamma);

double cutoff_weight(double phi, const BandParams& params);

}  // namespace lsr
