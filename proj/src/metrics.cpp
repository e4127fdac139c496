#include "lsr/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "lsr/parallel.hpp"

namespace lsr {

namespace {

// Corner bit layout: 1 = (i,j), 2 = (i+1,j), 4 = (i+1,j+1), 8 = (i,j+1);
// a corner is "inside" when phi <= 0.
int cell_case_2d(const ScalarField& phi, int i, int j) {
    int c = 0;
    if (phi.at(i, j, 0) <= 0.0) c |= 1;
    if (phi.at(i + 1, j, 0) <= 0.0) c |= 2;
    if (phi.at(i + 1, j + 1, 0) <= 0.0) c |= 4;
    if (phi.at(i, j + 1, 0) <= 0.0) c |= 8;
    return c;
}

bool mixed_sign(const double* v, int count) {
    bool pos = false, neg = false, zero = false;
    for (int i = 0; i < count; ++i) {
        if (v[i] > 0.0) pos = true;
        else if (v[i] < 0.0) neg = true;
        else zero = true;
    }
    return zero || (pos && neg);
}

}  // namespace

std::vector<std::int64_t> interface_cells(const ScalarField& phi) {
    const Grid& g = phi.grid;
    std::vector<std::int64_t> cells;
    const int nz = g.dim == 3 ? g.dims[2] - 1 : 1;
    const int kz = g.dim == 3 ? 1 : 0;
    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < g.dims[1] - 1; ++j) {
            for (int i = 0; i < g.dims[0] - 1; ++i) {
                double v[8];
                int c = 0;
                for (int dk = 0; dk <= kz; ++dk)
                    for (int dj = 0; dj <= 1; ++dj)
                        for (int di = 0; di <= 1; ++di) v[c++] = phi.at(i + di, j + dj, k + dk);
                if (mixed_sign(v, c))
                    cells.push_back((static_cast<std::int64_t>(k) * (g.dims[1] - 1) + j) *
                                        (g.dims[0] - 1) +
                                    i);
            }
        }
    }
    return cells;
}

namespace {

struct Segment {
    Vec a, b;
};

// Edge order: 0 bottom, 1 right, 2 top, 3 left.
Vec edge_crossing(const Grid& g, int i, int j, int edge, const ScalarField& phi) {
    auto lerp_t = [](double a, double b) { return a / (a - b); };
    const double x0 = g.origin[0] + i * g.dx, y0 = g.origin[1] + j * g.dx;
    switch (edge) {
        case 0: return {x0 + lerp_t(phi.at(i, j, 0), phi.at(i + 1, j, 0)) * g.dx, y0, 0.0};
        case 1:
            return {x0 + g.dx, y0 + lerp_t(phi.at(i + 1, j, 0), phi.at(i + 1, j + 1, 0)) * g.dx,
                    0.0};
        case 2: return {x0 + lerp_t(phi.at(i, j + 1, 0), phi.at(i + 1, j + 1, 0)) * g.dx, y0 + g.dx, 0.0};
        default:
            return {x0, y0 + lerp_t(phi.at(i, j, 0), phi.at(i, j + 1, 0)) * g.dx, 0.0};
    }
}

int front_segments_2d(const ScalarField& phi, int i, int j, Segment out[2]) {
    static const int table[16][4] = {
        {-1, -1, -1, -1}, {3, 0, -1, -1}, {0, 1, -1, -1}, {3, 1, -1, -1},
        {1, 2, -1, -1},   {-2, 0, 0, 0},  {0, 2, -1, -1}, {3, 2, -1, -1},
        {2, 3, -1, -1},   {0, 2, -1, -1}, {-2, 0, 0, 0},  {1, 2, -1, -1},
        {1, 3, -1, -1},   {0, 1, -1, -1}, {3, 0, -1, -1}, {-1, -1, -1, -1}};

    const int c = cell_case_2d(phi, i, j);
    if (table[c][0] == -1) return 0;

    if (table[c][0] == -2) {
        // Saddle: resolve by the sign of the corner average.
        const double avg = 0.25 * (phi.at(i, j, 0) + phi.at(i + 1, j, 0) +
                                   phi.at(i + 1, j + 1, 0) + phi.at(i, j + 1, 0));
        const bool center_inside = avg <= 0.0;
        int e[4];
        if (c == 5) {  // (i,j) and (i+1,j+1) inside
            if (center_inside) { e[0] = 0; e[1] = 1; e[2] = 2; e[3] = 3; }
            else { e[0] = 3; e[1] = 0; e[2] = 1; e[3] = 2; }
        } else {  // c == 10: (i+1,j) and (i,j+1) inside
            if (center_inside) { e[0] = 3; e[1] = 0; e[2] = 1; e[3] = 2; }
            else { e[0] = 0; e[1] = 1; e[2] = 2; e[3] = 3; }
        }
        out[0] = {edge_crossing(phi.grid, i, j, e[0], phi), edge_crossing(phi.grid, i, j, e[1], phi)};
        out[1] = {edge_crossing(phi.grid, i, j, e[2], phi), edge_crossing(phi.grid, i, j, e[3], phi)};
        return 2;
    }
    out[0] = {edge_crossing(phi.grid, i, j, table[c][0], phi),
              edge_crossing(phi.grid, i, j, table[c][1], phi)};
    return 1;
}

}  // namespace

double energy_2d(const ScalarField& phi, const DistanceField& dist, int p) {
    if (phi.grid.dim != 2) throw ConfigError("energy_2d: grid must be 2d");
    if (p < 1) throw ConfigError("energy_2d: p must be >= 1");
    if (!(phi.grid == dist.field.grid)) throw ConfigError("energy_2d: grid mismatch");

    const std::vector<std::int64_t> cells = interface_cells(phi);
    const std::int64_t nc = static_cast<std::int64_t>(cells.size());
    const int cells_x = phi.grid.dims[0] - 1;
    std::vector<double> contrib(static_cast<std::size_t>(nc), 0.0);

#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        const std::int64_t cid = cells[static_cast<std::size_t>(c)];
        const int i = static_cast<int>(cid % cells_x);
        const int j = static_cast<int>(cid / cells_x);
        Segment segs[2];
        const int ns = front_segments_2d(phi, i, j, segs);
        double acc = 0.0;
        for (int s = 0; s < ns; ++s) {
            const double len = norm(segs[s].b - segs[s].a);
            const double da = interp_q1(dist.field, segs[s].a);
            const double db = interp_q1(dist.field, segs[s].b);
            acc += len * 0.5 * (std::pow(std::abs(da), p) + std::pow(std::abs(db), p));
        }
        contrib[static_cast<std::size_t>(c)] = acc;
    }

    const double total =
        blocked_sum(nc, [&](std::int64_t c) { return contrib[static_cast<std::size_t>(c)]; });
    return std::pow(total, 1.0 / p);
}

double energy_3d(const ScalarField& phi, const DistanceField& dist, int p, int subcell_refine) {
    if (phi.grid.dim != 3) throw ConfigError("energy_3d: grid must be 3d");
    if (p < 1 || subcell_refine < 1) throw ConfigError("energy_3d: invalid p or refinement");
    if (!(phi.grid == dist.field.grid)) throw ConfigError("energy_3d: grid mismatch");

    const Grid& g = phi.grid;
    const std::vector<std::int64_t> cells = interface_cells(phi);
    const std::int64_t nc = static_cast<std::int64_t>(cells.size());
    const int cells_x = g.dims[0] - 1;
    const int cells_y = g.dims[1] - 1;
    const int r = subcell_refine;
    const double dxp = g.dx / r;
    const double select = std::sqrt(3.0) / 2.0 * dxp;
    std::vector<double> contrib(static_cast<std::size_t>(nc), 0.0);

#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        const std::int64_t cid = cells[static_cast<std::size_t>(c)];
        const int i = static_cast<int>(cid % cells_x);
        const int j = static_cast<int>((cid / cells_x) % cells_y);
        const int k = static_cast<int>(cid / (static_cast<std::int64_t>(cells_x) * cells_y));
        const Vec base = g.node(i, j, k);
        double acc = 0.0;
        for (int ck = 0; ck < r; ++ck) {
            for (int cj = 0; cj < r; ++cj) {
                for (int ci = 0; ci < r; ++ci) {
                    const Vec x{base[0] + (ci + 0.5) * dxp, base[1] + (cj + 0.5) * dxp,
                                base[2] + (ck + 0.5) * dxp};
                    if (std::abs(interp_q1(phi, x)) >= select) continue;
                    acc += std::pow(std::abs(interp_q1(dist.field, x)), p) * dxp * dxp;
                }
            }
        }
        contrib[static_cast<std::size_t>(c)] = acc;
    }

    const double total =
        blocked_sum(nc, [&](std::int64_t c) { return contrib[static_cast<std::size_t>(c)]; });
    return std::pow(total, 1.0 / p);
}

double surface_energy(const ScalarField& phi, const DistanceField& dist, int p,
                      int subcell_refine) {
    return phi.grid.dim == 2 ? energy_2d(phi, dist, p) : energy_3d(phi, dist, p, subcell_refine);
}

double err_on_cloud(const ScalarField& phi, const PointCloud& cloud, InterpolatorKind kind) {
    if (cloud.points.empty()) throw Error("err_on_cloud: empty cloud");
    const std::int64_t n = cloud.size();
    const double total = blocked_sum(n, [&](std::int64_t i) {
        return std::abs(interp(kind, phi, cloud.points[static_cast<std::size_t>(i)]));
    });
    return total / static_cast<double>(n);
}

double l1_update(const ScalarField& prev, const ScalarField& next, const BandMask& band) {
    if (!(prev.grid == next.grid) || !(prev.grid == band.grid))
        throw ConfigError("l1_update: grid mismatch");
    const double cell_measure = std::pow(prev.grid.dx, prev.grid.dim);
    const std::int64_t n = static_cast<std::int64_t>(band.active.size());
    return cell_measure * blocked_sum(n, [&](std::int64_t a) {
               const std::size_t id = static_cast<std::size_t>(band.active[static_cast<std::size_t>(a)]);
               return std::abs(next.values[id] - prev.values[id]);
           });
}

double l1_error_vs_exact(const ScalarField& phi, const ShapeSpec& spec, const BandMask& band) {
    if (!(phi.grid == band.grid)) throw ConfigError("l1_error_vs_exact: grid mismatch");
    const Grid& g = phi.grid;
    const double cell_measure = std::pow(g.dx, g.dim);
    const std::int64_t n = static_cast<std::int64_t>(band.tube.size());
    return cell_measure * blocked_sum(n, [&](std::int64_t t) {
               const std::int64_t id = band.tube[static_cast<std::size_t>(t)];
               const Index3 ijk = g.unflatten(id);
               const double exact = exact_sdf(spec, g.node(ijk[0], ijk[1], ijk[2]));
               return std::abs(phi.values[static_cast<std::size_t>(id)] - exact);
           });
}

namespace {

double trailing_mean(const EnergyHistory& hist, int end, int k) {
    double s = 0.0;
    for (int i = end - k; i < end; ++i) s += hist.values[static_cast<std::size_t>(i)];
    return s / k;
}

}  // namespace

double delta_energy(const EnergyHistory& hist, int n) {
    if (n < 2 || static_cast<int>(hist.values.size()) < n) return 1.0;
    const int kn = std::min(n, hist.k_window);
    const int km = std::min(n - 1, hist.k_window);
    const double en = trailing_mean(hist, n, kn);
    const double em = trailing_mean(hist, n - 1, km);
    if (en == 0.0) return 0.0;
    return std::abs(em - en) / en;
}

StopDecision stopping_check(const EnergyHistory& hist, int n, int min_iters, int max_iters,
                            double tol) {
    if (static_cast<int>(hist.values.size()) < n)
        throw ConfigError("stopping_check: history shorter than n");
    if (n >= max_iters) return StopDecision::Stop;
    if (n < min_iters) return StopDecision::Continue;
    const double en = trailing_mean(hist, n, std::min(n, hist.k_window));
    if (en == 0.0) return StopDecision::Stop;
    return delta_energy(hist, n) < tol ? StopDecision::Stop : StopDecision::Continue;
}

}  // namespace lsr
