#include "lsr/driver.hpp"

#include <chrono>
#include <cmath>

#include "lsr/parallel.hpp"
#include "lsr/reinit.hpp"

namespace lsr {

std::vector<RunEntry> default_runs(int count) {
    if (count < 1) throw ConfigError("default_runs: need at least one run");
    std::vector<RunEntry> runs;
    for (int r = 1; r <= count; ++r) {
        if (r == 1) runs.push_back({1, 0.0});
        else if (r == 2) runs.push_back({2, 0.0});
        else runs.push_back({2, 1.0});
    }
    return runs;
}

std::vector<std::uint8_t> mark_external(const DistanceField& dist, double gamma_s) {
    if (!(gamma_s > 0.0)) throw ConfigError("mark_external: gamma_s must be positive");
    const Grid& g = dist.field.grid;
    const std::int64_t n = g.num_nodes();
    std::vector<std::uint8_t> external(static_cast<std::size_t>(n), 0);

    auto passable = [&](std::int64_t id) {
        return dist.field.values[static_cast<std::size_t>(id)] >= gamma_s;
    };

    for (int k = 0; k < g.dims[2]; ++k) {
        for (int j = 0; j < g.dims[1]; ++j) {
            for (int i = 0; i < g.dims[0]; ++i) {
                bool boundary = i == 0 || i == g.dims[0] - 1 || j == 0 || j == g.dims[1] - 1;
                if (g.dim == 3) boundary = boundary || k == 0 || k == g.dims[2] - 1;
                if (!boundary) continue;
                const std::int64_t id = g.index(i, j, k);
                if (passable(id)) external[static_cast<std::size_t>(id)] = 1;
            }
        }
    }

    const int orderings = g.dim == 3 ? 8 : 4;
    bool changed = true;
    while (changed) {
        changed = false;
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
                        const std::int64_t id = g.index(i, j, k);
                        if (external[static_cast<std::size_t>(id)] || !passable(id)) continue;
                        bool near = false;
                        const int ijk[3] = {i, j, k};
                        for (int ax = 0; ax < g.dim && !near; ++ax) {
                            for (int s = -1; s <= 1 && !near; s += 2) {
                                int nb[3] = {i, j, k};
                                nb[ax] = ijk[ax] + s;
                                if (nb[ax] < 0 || nb[ax] >= g.dims[ax]) continue;
                                near = external[static_cast<std::size_t>(
                                           g.index(nb[0], nb[1], nb[2]))] != 0;
                            }
                        }
                        if (near) {
                            external[static_cast<std::size_t>(id)] = 1;
                            changed = true;
                        }
                    }
                }
            }
        }
    }
    return external;
}

ScalarField initial_level_set(const DistanceField& dist, const std::vector<std::uint8_t>& external,
                              double gamma_s) {
    const Grid& g = dist.field.grid;
    const std::int64_t n = g.num_nodes();
    if (external.size() != static_cast<std::size_t>(n))
        throw ConfigError("initial_level_set: external flag size mismatch");
    bool any = false;
    for (std::uint8_t e : external)
        if (e) {
            any = true;
            break;
        }
    if (!any) throw Error("initial_level_set: empty external set");

    DistanceField work;
    work.sentinel = 10.0 * g.diagonal();
    work.field = ScalarField(g, work.sentinel);
    work.exact = external;
#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < n; ++id)
        if (external[static_cast<std::size_t>(id)])
            work.field.values[static_cast<std::size_t>(id)] =
                dist.field.values[static_cast<std::size_t>(id)] - gamma_s;

    fast_sweep(work);

#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < n; ++id)
        if (!external[static_cast<std::size_t>(id)])
            work.field.values[static_cast<std::size_t>(id)] =
                -work.field.values[static_cast<std::size_t>(id)];
    return work.field;
}

ScalarField transfer_solution(const ScalarField& coarse, const Grid& fine_grid) {
    ScalarField fine(fine_grid);
    const std::int64_t n = fine_grid.num_nodes();
#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < n; ++id) {
        const Index3 ijk = fine_grid.unflatten(id);
        const Vec p = coarse.grid.clamp_to_hull(fine_grid.node(ijk[0], ijk[1], ijk[2]));
        fine.values[static_cast<std::size_t>(id)] = interp_q1(coarse, p);
    }
    return fine;
}

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

ScheduleResult run_schedule(const PointCloud& cloud, const ScheduleConfig& cfg) {
    if (cfg.runs.empty()) throw ConfigError("run_schedule: empty runs list");
    if (cloud.points.empty()) throw Error("run_schedule: empty cloud");
    const int dim = cloud.dim;

    const CloudStats stats = compute_stats(cloud, cfg.sample_fraction, cfg.k_s, cfg.seed);

    ScheduleResult out;
    out.h_s = stats.h_s;
    out.gamma_s = stats.gamma_s;

    ScalarField phi;
    for (int r = 1; r <= static_cast<int>(cfg.runs.size()); ++r) {
        const RunEntry entry = cfg.runs[static_cast<std::size_t>(r - 1)];
        const double t_run0 = now_ms();

        const int exponent = cfg.dx_rule == DxRule::Standard ? r - 1 : r;
        const double dx = stats.h_s / std::pow(2.0, exponent);
        const double dt = cfg.dt_factor * dx;
        const BandParams band_params = default_band_params(dim, dx);
        const int pad =
            static_cast<int>(std::ceil(std::max(stats.gamma_s, band_params.gamma) / dx)) + 4;
        const Grid grid =
            build_grid(stats.bbox_min, stats.bbox_max, dim, dx, pad, cfg.node_budget);
        const DistanceField dist = build_distance_field(grid, cloud);
        const ReinitConfig reinit_cfg = ReinitConfig::defaults(dx, band_params.gamma);

        if (r == 1) {
            const std::vector<std::uint8_t> external = mark_external(dist, stats.gamma_s);
            phi = initial_level_set(dist, external, stats.gamma_s);
        } else {
            phi = transfer_solution(phi, grid);
            BandMask band = narrow_band(phi, band_params.gamma);
            reinitialize(phi, band, band_params.gamma, reinit_cfg);
        }

        StepConfig step;
        step.p = entry.p;
        step.delta = entry.delta;
        step.dt = dt;
        step.interp = cfg.interp;
        step.band = band_params;

        EnergyHistory hist;
        ScalarField next(grid);
        int iters = 0;
        for (int n = 1; n <= cfg.max_iters; ++n) {
            const double t0 = now_ms();
            const BandMask band = narrow_band(phi, band_params.gamma);
            const double e2 = surface_energy(phi, dist, 2, cfg.energy_refine);
            hist.values.push_back(e2);

            if (entry.p > 1 && e2 == 0.0) {
                next.values = phi.values;  // front sits on the cloud; stopping will fire
            } else {
                sl_step(phi, dist, band, step, e2, next);
            }
            reinitialize(next, band, band_params.gamma, reinit_cfg);

            MetricsRecord rec;
            rec.iter = n;
            rec.e2 = e2;
            rec.delta_e = delta_energy(hist, n);
            rec.l1_update = l1_update(phi, next, band);
            std::swap(phi.values, next.values);
            rec.err_cloud = err_on_cloud(phi, cloud, cfg.interp);
            if (cfg.exact_shape) rec.l1_error = l1_error_vs_exact(phi, *cfg.exact_shape, band);
            rec.wall_ms = now_ms() - t0;
            out.log.push_back({r, rec});
            iters = n;

            if (stopping_check(hist, n, cfg.min_iters, cfg.max_iters, cfg.tol) ==
                StopDecision::Stop)
                break;
        }

        RunResult res;
        res.iterations = iters;
        res.dx = dx;
        res.final_e2 = surface_energy(phi, dist, 2, cfg.energy_refine);
        res.final_err_s = err_on_cloud(phi, cloud, cfg.interp);
        if (cfg.exact_shape) {
            const BandMask final_band = narrow_band(phi, band_params.gamma);
            res.final_l1_error = l1_error_vs_exact(phi, *cfg.exact_shape, final_band);
        }
        res.wall_ms = now_ms() - t_run0;
        res.phi = phi;
        out.runs.push_back(std::move(res));
    }
    return out;
}

}  // namespace lsr
