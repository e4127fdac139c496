#include "lsr/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsr::ref {

BandMask narrow_band(const ScalarField& phi, double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("narrow_band: gamma must be positive");
    const Grid& g = phi.grid;
    const std::int64_t n = g.num_nodes();

    BandMask mask;
    mask.grid = g;
    mask.state.assign(static_cast<std::size_t>(n), NodeState::Inactive);

    for (std::int64_t id = 0; id < n; ++id)
        if (std::abs(phi.values[static_cast<std::size_t>(id)]) < gamma)
            mask.state[static_cast<std::size_t>(id)] = NodeState::Active;

    const int kz = g.dim == 3 ? 1 : 0;
    for (int k = 0; k < g.dims[2]; ++k) {
        for (int j = 0; j < g.dims[1]; ++j) {
            for (int i = 0; i < g.dims[0]; ++i) {
                const std::int64_t id = g.index(i, j, k);
                if (mask.state[static_cast<std::size_t>(id)] != NodeState::Inactive) continue;
                bool near_active = false;
                for (int dk = -kz; dk <= kz && !near_active; ++dk)
                    for (int dj = -1; dj <= 1 && !near_active; ++dj)
                        for (int di = -1; di <= 1 && !near_active; ++di) {
                            const int ni = i + di, nj = j + dj, nk = k + dk;
                            if (ni < 0 || nj < 0 || nk < 0 || ni >= g.dims[0] ||
                                nj >= g.dims[1] || nk >= g.dims[2])
                                continue;
                            near_active =
                                mask.state[static_cast<std::size_t>(g.index(ni, nj, nk))] ==
                                NodeState::Active;
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

void sl_step(const ScalarField& phi, const DistanceField& dist, const BandMask& mask,
             const StepConfig& cfg, double energy_p, ScalarField& out) {
    cfg.validate();
    if (cfg.p > 1 && !(energy_p > 0.0))
        throw Error("sl_step: energy must be positive for p > 1");
    const Grid& g = phi.grid;
    if (!(out.grid == g)) out = ScalarField(g);
    out.values = phi.values;

    const double grad_threshold = cfg.fallback_c * std::pow(cfg.dt, cfg.fallback_alpha);
    for (const std::int64_t id : mask.active) {
        const Index3 ijk = g.unflatten(id);
        const int i = ijk[0], j = ijk[1], k = ijk[2];
        const double phi_j = phi.values[static_cast<std::size_t>(id)];

        const Vec grad_phi = centered_gradient(phi, i, j, k);
        double star;
        if (norm(grad_phi) < grad_threshold) {
            double sum = 0.0;
            int count = 0;
            for (int ax = 0; ax < g.dim; ++ax) {
                for (int s = -1; s <= 1; s += 2) {
                    int nb[3] = {i, j, k};
                    nb[ax] += s;
                    if (nb[ax] < 0 || nb[ax] >= g.dims[ax]) continue;
                    sum += interp(cfg.interp, phi, g.node(nb[0], nb[1], nb[2]));
                    ++count;
                }
            }
            star = sum / count;
        } else {
            const double d_j = dist.field.values[static_cast<std::size_t>(id)];
            const Vec grad_d = centered_gradient(dist.field, i, j, k);
            const double c_j = scale_factor(d_j, energy_p, cfg.p);
            const Vec base = g.node(i, j, k) + (c_j * cfg.dt) * grad_d;
            const double spread = std::sqrt(std::max(0.0, c_j * cfg.delta * d_j * cfg.dt / cfg.p));

            auto foot_value = [&](const Vec& displaced) {
                if (!std::isfinite(displaced[0]) || !std::isfinite(displaced[1]) ||
                    !std::isfinite(displaced[2]))
                    return std::numeric_limits<double>::quiet_NaN();
                return interp(cfg.interp, phi, g.clamp_to_hull(displaced));
            };
            double sum = 0.0;
            if (g.dim == 2) {
                const TangentBasis tb = tangent_basis(2, grad_phi);
                for (int s = -1; s <= 1; s += 2) sum += foot_value(base + (s * spread) * tb.v1);
                star = sum / 2.0;
            } else {
                const TangentBasis tb = tangent_basis(3, grad_phi);
                for (int s1 = -1; s1 <= 1; s1 += 2)
                    for (int s2 = -1; s2 <= 1; s2 += 2)
                        sum += foot_value(base + (s1 * spread) * tb.v1 + (s2 * spread) * tb.v2);
                star = sum / 4.0;
            }
        }

        const double c = cutoff_weight(phi_j, cfg.band);
        const double next = phi_j + c * (star - phi_j);
        if (!std::isfinite(next)) throw NumericalError("sl_step: non-finite update");
        out.values[static_cast<std::size_t>(id)] = next;
    }
}

namespace {

double godunov_norm(const ScalarField& phi, const Index3& ijk, double sgn) {
    const Grid& g = phi.grid;
    double acc = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) {
        double dminus = 0.0, dplus = 0.0;
        if (ijk[ax] > 0) {
            int lo[3] = {ijk[0], ijk[1], ijk[2]};
            lo[ax] -= 1;
            dminus = (phi.at(ijk[0], ijk[1], ijk[2]) - phi.at(lo[0], lo[1], lo[2])) / g.dx;
        }
        if (ijk[ax] < g.dims[ax] - 1) {
            int hi[3] = {ijk[0], ijk[1], ijk[2]};
            hi[ax] += 1;
            dplus = (phi.at(hi[0], hi[1], hi[2]) - phi.at(ijk[0], ijk[1], ijk[2])) / g.dx;
        }
        if (sgn > 0.0)
            acc += std::max(sqr(std::max(dminus, 0.0)), sqr(std::min(dplus, 0.0)));
        else
            acc += std::max(sqr(std::min(dminus, 0.0)), sqr(std::max(dplus, 0.0)));
    }
    return std::sqrt(acc);
}

}  // namespace

int reinit_iterate(ScalarField& phi, const BandMask& band, const std::vector<std::uint8_t>& frozen,
                   const ReinitConfig& cfg) {
    cfg.validate();
    if (!(phi.grid == band.grid)) throw ConfigError("reinit_iterate: grid mismatch");
    const Grid& g = phi.grid;

    std::vector<std::int64_t> nodes;
    nodes.reserve(band.tube.size());
    for (const std::int64_t id : band.tube)
        if (!frozen[static_cast<std::size_t>(id)]) nodes.push_back(id);

    std::vector<double> sign_of(nodes.size());
    const double eps2 = sqr(cfg.sign_eps);
    for (std::size_t t = 0; t < nodes.size(); ++t) {
        const double v = phi.values[static_cast<std::size_t>(nodes[t])];
        sign_of[t] = v / std::sqrt(v * v + eps2);
    }

    ScalarField next = phi;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        double residual = 0.0;
        for (std::size_t t = 0; t < nodes.size(); ++t) {
            const std::int64_t id = nodes[t];
            const double s = sign_of[t];
            const double gn = godunov_norm(phi, g.unflatten(id), s);
            const double upd = -cfg.dtau * s * (gn - 1.0);
            next.values[static_cast<std::size_t>(id)] =
                phi.values[static_cast<std::size_t>(id)] + upd;
            residual = std::max(residual, std::abs(upd));
        }
        std::swap(phi.values, next.values);
        if (residual < cfg.residual_tol * g.dx) {
            ++iter;
            break;
        }
    }
    return iter;
}

double energy_2d(const ScalarField& phi, const DistanceField& dist, int p) {
    // Same front extraction as the parallel kernel, serial trapezoid sums.
    if (phi.grid.dim != 2) throw ConfigError("energy_2d: grid must be 2d");
    double total = 0.0;
    const Grid& g = phi.grid;
    for (int j = 0; j < g.dims[1] - 1; ++j) {
        for (int i = 0; i < g.dims[0] - 1; ++i) {
            const double c00 = phi.at(i, j, 0), c10 = phi.at(i + 1, j, 0);
            const double c11 = phi.at(i + 1, j + 1, 0), c01 = phi.at(i, j + 1, 0);
            const bool pos = c00 > 0 || c10 > 0 || c11 > 0 || c01 > 0;
            const bool neg = c00 < 0 || c10 < 0 || c11 < 0 || c01 < 0;
            const bool zero = c00 == 0 || c10 == 0 || c11 == 0 || c01 == 0;
            if (!(zero || (pos && neg))) continue;

            // Walk the cell edges and collect crossings; inside = (phi <= 0).
            const double corner[4] = {c00, c10, c11, c01};
            Vec pts[4];
            int np = 0;
            const Vec base = g.node(i, j, 0);
            const int ea[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
            const Vec epos[4][2] = {{{0, 0, 0}, {1, 0, 0}},
                                    {{1, 0, 0}, {1, 1, 0}},
                                    {{0, 1, 0}, {1, 1, 0}},
                                    {{0, 0, 0}, {0, 1, 0}}};
            for (int e = 0; e < 4; ++e) {
                const double a = corner[ea[e][0]], b = corner[ea[e][1]];
                if ((a <= 0) == (b <= 0)) continue;
                const double t = a / (a - b);
                pts[np++] = {base[0] + (epos[e][0][0] + t * (epos[e][1][0] - epos[e][0][0])) * g.dx,
                             base[1] + (epos[e][0][1] + t * (epos[e][1][1] - epos[e][0][1])) * g.dx,
                             0.0};
            }
            if (np < 2) continue;
            auto segment = [&](const Vec& a, const Vec& b) {
                const double da = interp_q1(dist.field, a);
                const double db = interp_q1(dist.field, b);
                return norm(b - a) * 0.5 * (std::pow(std::abs(da), p) + std::pow(std::abs(db), p));
            };
            if (np == 2) {
                total += segment(pts[0], pts[1]);
            } else {
                // Saddle: pair crossings by the corner-average rule. Edge
                // order above is bottom, right, top, left.
                const double avg = 0.25 * (c00 + c10 + c11 + c01);
                const bool bl_inside = c00 <= 0;
                if ((avg <= 0) == bl_inside)
                    total += segment(pts[0], pts[1]) + segment(pts[2], pts[3]);
                else
                    total += segment(pts[0], pts[3]) + segment(pts[1], pts[2]);
            }
        }
    }
    return std::pow(total, 1.0 / p);
}

double energy_3d(const ScalarField& phi, const DistanceField& dist, int p, int subcell_refine) {
    if (phi.grid.dim != 3) throw ConfigError("energy_3d: grid must be 3d");
    const Grid& g = phi.grid;
    const int r = subcell_refine;
    const double dxp = g.dx / r;
    const double select = std::sqrt(3.0) / 2.0 * dxp;
    double total = 0.0;
    for (const std::int64_t cid : interface_cells(phi)) {
        const int cells_x = g.dims[0] - 1, cells_y = g.dims[1] - 1;
        const int i = static_cast<int>(cid % cells_x);
        const int j = static_cast<int>((cid / cells_x) % cells_y);
        const int k = static_cast<int>(cid / (static_cast<std::int64_t>(cells_x) * cells_y));
        const Vec base = g.node(i, j, k);
        for (int ck = 0; ck < r; ++ck)
            for (int cj = 0; cj < r; ++cj)
                for (int ci = 0; ci < r; ++ci) {
                    const Vec x{base[0] + (ci + 0.5) * dxp, base[1] + (cj + 0.5) * dxp,
                                base[2] + (ck + 0.5) * dxp};
                    if (std::abs(interp_q1(phi, x)) >= select) continue;
                    total += std::pow(std::abs(interp_q1(dist.field, x)), p) * dxp * dxp;
                }
    }
    return std::pow(total, 1.0 / p);
}

double err_on_cloud(const ScalarField& phi, const PointCloud& cloud, InterpolatorKind kind) {
    double total = 0.0;
    for (const Vec& q : cloud.points) total += std::abs(interp(kind, phi, q));
    return total / static_cast<double>(cloud.size());
}

}  // namespace lsr::ref
