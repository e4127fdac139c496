#include "lsr/evolve.hpp"

#include <atomic>
#include <limits>
#include <cmath>
#include <string>

namespace lsr {

TangentBasis tangent_basis(int dim, const Vec& grad) {
    TangentBasis tb;
    const double gnorm = norm(grad);
    if (dim == 2) {
        if (gnorm == 0.0) {
            tb.v1 = {1.0, 0.0, 0.0};
            return tb;
        }
        tb.v1 = {grad[1] / gnorm, -grad[0] / gnorm, 0.0};
        return tb;
    }
    const double r = std::sqrt(sqr(grad[0]) + sqr(grad[2]));
    if (gnorm == 0.0 || r < 1e-14 * gnorm) {
        tb.v1 = {1.0, 0.0, 0.0};
        tb.v2 = {0.0, 0.0, 1.0};
        return tb;
    }
    tb.v1 = {-grad[2] / r, 0.0, grad[0] / r};
    tb.v2 = {-grad[0] * grad[1] / (r * gnorm), r / gnorm, -grad[1] * grad[2] / (r * gnorm)};
    return tb;
}

double scale_factor(double d_j, double energy_p, int p) {
    if (p == 1) return 1.0;
    if (!(energy_p > 0.0)) throw Error("scale_factor: energy must be positive for p > 1");
    double f = 1.0;
    for (int i = 1; i < p; ++i) f *= d_j / energy_p;
    return f;
}

void sl_step(const ScalarField& phi, const DistanceField& dist, const BandMask& mask,
             const StepConfig& cfg, double energy_p, ScalarField& out) {
    cfg.validate();
    if (!(phi.grid == dist.field.grid) || !(phi.grid == mask.grid))
        throw ConfigError("sl_step: phi, dist and mask must share one grid");
    if (cfg.p > 1 && !(energy_p > 0.0))
        throw Error("sl_step: energy must be positive for p > 1");
    const Grid& g = phi.grid;
    if (!(out.grid == g)) out = ScalarField(g);

    out.values = phi.values;  // non-active nodes carry phi over

    const double grad_threshold = cfg.fallback_c * std::pow(cfg.dt, cfg.fallback_alpha);
    const std::int64_t nb = static_cast<std::int64_t>(mask.active.size());
    std::atomic<std::int64_t> bad_node{-1};

#pragma omp parallel for schedule(static)
    for (std::int64_t a = 0; a < nb; ++a) {
        const std::int64_t id = mask.active[static_cast<std::size_t>(a)];
        const Index3 ijk = g.unflatten(id);
        const int i = ijk[0], j = ijk[1], k = ijk[2];
        const double phi_j = phi.values[static_cast<std::size_t>(id)];

        const Vec grad_phi = centered_gradient(phi, i, j, k);
        double star;
        if (norm(grad_phi) < grad_threshold) {
            // Average of the interpolant at the first axis neighbours.
            double sum = 0.0;
            int count = 0;
            for (int ax = 0; ax < g.dim; ++ax) {
                for (int s = -1; s <= 1; s += 2) {
                    int nb_ijk[3] = {i, j, k};
                    nb_ijk[ax] += s;
                    if (nb_ijk[ax] < 0 || nb_ijk[ax] >= g.dims[ax]) continue;
                    sum += interp(cfg.interp, phi, g.node(nb_ijk[0], nb_ijk[1], nb_ijk[2]));
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
                for (int s1 = -1; s1 <= 1; s1 += 2) {
                    for (int s2 = -1; s2 <= 1; s2 += 2)
                        sum += foot_value(base + (s1 * spread) * tb.v1 + (s2 * spread) * tb.v2);
                }
                star = sum / 4.0;
            }
        }

        const double c = cutoff_weight(phi_j, cfg.band);
        const double next = phi_j + c * (star - phi_j);
        if (!std::isfinite(next)) bad_node.store(id);
        out.values[static_cast<std::size_t>(id)] = next;
    }

    if (bad_node.load() >= 0) {
        const Index3 ijk = g.unflatten(bad_node.load());
        throw NumericalError("sl_step: non-finite update at node (" + std::to_string(ijk[0]) +
                             ", " + std::to_string(ijk[1]) + ", " + std::to_string(ijk[2]) + ")");
    }
}

}  // namespace lsr
