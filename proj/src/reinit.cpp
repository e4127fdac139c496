#include "lsr/reinit.hpp"

#include <algorithm>
#include <cmath>

namespace lsr {

ReinitConfig ReinitConfig::defaults(double dx, double gamma) {
    ReinitConfig cfg;
    cfg.dtau = 0.5 * dx;
    cfg.max_iters = 4 * static_cast<int>(std::ceil(gamma / dx));
    cfg.residual_tol = 1e-3;
    cfg.sign_eps = dx;
    cfg.validate();
    return cfg;
}

std::vector<std::uint8_t> interface_one_step(ScalarField& phi) {
    const Grid& g = phi.grid;
    const std::int64_t n = g.num_nodes();
    const std::vector<double> prev = phi.values;
    std::vector<std::uint8_t> frozen(static_cast<std::size_t>(n), 0);

#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < n; ++id) {
        const double pj = prev[static_cast<std::size_t>(id)];
        if (pj == 0.0) continue;  // already on the interface, nothing to assign
        const Index3 ijk = g.unflatten(id);
        double best = -1.0;
        for (int ax = 0; ax < g.dim; ++ax) {
            for (int s = -1; s <= 1; s += 2) {
                int nb[3] = {ijk[0], ijk[1], ijk[2]};
                nb[ax] += s;
                if (nb[ax] < 0 || nb[ax] >= g.dims[ax]) continue;
                const double pk = prev[static_cast<std::size_t>(g.index(nb[0], nb[1], nb[2]))];
                if (pj * pk >= 0.0) continue;
                const double crossing =
                    g.dx * std::abs(pj) / (std::abs(pj) + std::abs(pk));
                best = best < 0.0 ? crossing : std::min(best, crossing);
            }
        }
        if (best >= 0.0) {
            phi.values[static_cast<std::size_t>(id)] = pj > 0.0 ? best : -best;
            frozen[static_cast<std::size_t>(id)] = 1;
        }
    }

    bool any = false;
    for (std::uint8_t f : frozen)
        if (f) {
            any = true;
            break;
        }
    if (!any) {
        bool has_zero = std::any_of(prev.begin(), prev.end(), [](double v) { return v == 0.0; });
        if (!has_zero) throw NoInterfaceError("interface_one_step: phi has no sign change");
    }
    return frozen;
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
    const std::int64_t nn = static_cast<std::int64_t>(nodes.size());

    // Smoothed sign of the field at entry, fixed across iterations.
    std::vector<double> sign_of(static_cast<std::size_t>(nn));
    const double eps2 = sqr(cfg.sign_eps);
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < nn; ++t) {
        const double v = phi.values[static_cast<std::size_t>(nodes[static_cast<std::size_t>(t)])];
        sign_of[static_cast<std::size_t>(t)] = v / std::sqrt(v * v + eps2);
    }

    ScalarField next = phi;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        double residual = 0.0;
#pragma omp parallel for schedule(static) reduction(max : residual)
        for (std::int64_t t = 0; t < nn; ++t) {
            const std::int64_t id = nodes[static_cast<std::size_t>(t)];
            const double s = sign_of[static_cast<std::size_t>(t)];
            const Index3 ijk = g.unflatten(id);
            const double gn = godunov_norm(phi, ijk, s);
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

ReinitResult reinitialize(ScalarField& phi, const BandMask& band, double gamma,
                          const ReinitConfig& cfg) {
    ReinitResult res;
    try {
        const std::vector<std::uint8_t> frozen = interface_one_step(phi);
        res.had_interface = true;
        res.iterations = reinit_iterate(phi, band, frozen, cfg);
    } catch (const NoInterfaceError&) {
        res.had_interface = false;
    }
    clamp_field(phi, gamma);
    return res;
}

}  // namespace lsr
