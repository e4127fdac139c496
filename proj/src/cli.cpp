#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "lsr/io.hpp"
#include "lsr/parallel.hpp"

namespace lsr {

namespace {

ShapeKind parse_shape_kind(const std::string& name) {
    if (name == "circle") return ShapeKind::Circle;
    if (name == "square45") return ShapeKind::Square45;
    if (name == "sphere") return ShapeKind::Sphere;
    if (name == "cube_spheres") return ShapeKind::CubeSpheres;
    throw ConfigError("unknown shape '" + name + "'");
}

int default_points(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Circle: return 64;
        case ShapeKind::Square45: return 24;
        case ShapeKind::Sphere: return 2562;
        case ShapeKind::CubeSpheres: return 1500;
    }
    return 64;
}

double default_size(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Circle:
        case ShapeKind::Sphere: return 1.0;
        case ShapeKind::Square45: return std::numbers::sqrt2;  // vertices at distance 1
        case ShapeKind::CubeSpheres: return 0.8;
    }
    return 1.0;
}

ShapeSpec make_shape(const std::string& name, double radius, double edge, int points) {
    ShapeSpec spec;
    spec.kind = parse_shape_kind(name);
    const bool uses_radius = spec.kind == ShapeKind::Circle || spec.kind == ShapeKind::Sphere;
    spec.size = uses_radius ? (radius > 0.0 ? radius : default_size(spec.kind))
                            : (edge > 0.0 ? edge : default_size(spec.kind));
    spec.n_points = points > 0 ? points : default_points(spec.kind);
    spec.validate();
    return spec;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Level-set surface reconstruction from point clouds"};
    app.set_config("--config", "", "plain key=value config file; command line wins");

    std::string input, format_name, shape_name, exact_shape_name, interp_name = "weno";
    std::string out_prefix = "lsrecon";
    int dim = 0, runs = 3, points = 0, max_iter = 100, threads = 0;
    double ks = 2.0, tol = 1e-4, dt_factor = 0.25, radius = 0.0, edge = 0.0;
    std::uint64_t seed = 0;
    bool fine_start = false, emit_fields = false, emit_metrics = false;
    std::vector<std::string> run_params;

    app.add_option("--input", input, "point cloud file (xyz or ply)");
    app.add_option("--format", format_name, "input format: xyz or ply (default: by extension)");
    app.add_option("--shape", shape_name, "synthetic cloud: circle, square45, sphere, cube_spheres");
    app.add_option("--points", points, "synthetic cloud size");
    app.add_option("--radius", radius, "circle/sphere radius");
    app.add_option("--edge", edge, "square45/cube_spheres edge length");
    app.add_option("--dim", dim, "cloud dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
    app.add_option("--runs", runs, "number of runs (default 3)");
    app.add_option("--interp", interp_name, "interpolator: q1 or weno")
        ->check(CLI::IsMember({"q1", "weno"}));
    app.add_option("--ks", ks, "initial-data threshold multiplier K_S (default 2.0)");
    app.add_flag("--fine-start", fine_start, "start from dx = h_S/2 instead of h_S");
    app.add_option("--seed", seed, "seed for all sampling");
    app.add_option("--run-params", run_params, "per-run override triples r:p:delta");
    app.add_option("--max-iter", max_iter, "iteration cap per run (default 100)");
    app.add_option("--tol", tol, "energy stagnation tolerance (default 1e-4)");
    app.add_option("--dt-factor", dt_factor, "dt = factor * dx (default 0.25)");
    app.add_option("--out", out_prefix, "output path prefix");
    app.add_flag("--emit-fields", emit_fields, "write per-run VTK fields");
    app.add_flag("--emit-metrics", emit_metrics, "write the per-iteration metrics CSV");
    app.add_option("--exact-shape", exact_shape_name,
                   "analytic shape for the L1 error column (circle, square45, sphere, cube_spheres)");
    app.add_option("--threads", threads, "worker threads (default: runtime choice)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (input.empty() == shape_name.empty())
            throw ConfigError("exactly one of --input and --shape is required");
        if (runs < 1) throw ConfigError("--runs must be >= 1");

        set_threads(threads);

        PointCloud cloud;
        if (!shape_name.empty()) {
            const ShapeSpec spec = make_shape(shape_name, radius, edge, points);
            if (dim != 0 && dim != spec.dim())
                throw ConfigError("--dim does not match shape '" + shape_name + "'");
            cloud = sample_shape(spec, seed);
        } else {
            if (!std::filesystem::exists(input)) throw ConfigError("input file not found: " + input);
            CloudFormat fmt;
            if (format_name == "xyz") fmt = CloudFormat::Xyz;
            else if (format_name == "ply") fmt = CloudFormat::Ply;
            else if (format_name.empty())
                fmt = input.size() >= 4 && input.substr(input.size() - 4) == ".ply"
                          ? CloudFormat::Ply
                          : CloudFormat::Xyz;
            else
                throw ConfigError("unknown format '" + format_name + "'");
            cloud = load_cloud(input, fmt);
            if (dim != 0 && dim != cloud.dim)
                throw ConfigError("--dim does not match the input file");
        }

        ScheduleConfig cfg;
        cfg.runs = default_runs(runs);
        for (const std::string& triple : run_params) {
            int r = 0, p = 0;
            double delta = 0.0;
            if (std::sscanf(triple.c_str(), "%d:%d:%lf", &r, &p, &delta) != 3 || r < 1 ||
                r > runs || (p != 1 && p != 2) || delta < 0.0 || delta > 1.0)
                throw ConfigError("bad --run-params entry '" + triple + "' (want r:p:delta)");
            cfg.runs[static_cast<std::size_t>(r - 1)] = {p, delta};
        }
        cfg.dx_rule = fine_start ? DxRule::Fine : DxRule::Standard;
        cfg.dt_factor = dt_factor;
        cfg.k_s = ks;
        cfg.seed = seed;
        cfg.max_iters = max_iter;
        cfg.tol = tol;
        cfg.interp = interp_name == "q1" ? InterpolatorKind::Q1 : InterpolatorKind::Weno;
        if (!exact_shape_name.empty())
            cfg.exact_shape = make_shape(exact_shape_name, radius, edge, points);

        const ScheduleResult result = run_schedule(cloud, cfg);

        std::printf("cloud: %lld points, h_S = %.6g, gamma_S = %.6g\n",
                    static_cast<long long>(cloud.size()), result.h_s, result.gamma_s);
        for (std::size_t r = 0; r < result.runs.size(); ++r) {
            const RunResult& run = result.runs[r];
            std::printf("run %zu: %d iterations, E2 = %.6e, Err_S = %.6e, %.2f s\n", r + 1,
                        run.iterations, run.final_e2, run.final_err_s, run.wall_ms / 1000.0);
        }

        OutputSpec out{out_prefix, emit_fields, emit_metrics, true};
        if (out.write_metrics) write_metrics_csv(result.log, out.prefix + "_metrics.csv");
        if (out.write_fields) {
            for (std::size_t r = 0; r < result.runs.size(); ++r) {
                if (!out.write_per_run && r + 1 < result.runs.size()) continue;
                write_field_vtk(result.runs[r].phi,
                                out.prefix + "_run" + std::to_string(r + 1) + ".vtk");
            }
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lsr
