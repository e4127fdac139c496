#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lsr/cloud.hpp"
#include "lsr/distance.hpp"
#include "lsr/evolve.hpp"
#include "lsr/metrics.hpp"

namespace lsr {

struct RunEntry {
    int p = 1;
    double delta = 0.0;
};

// r=1: p=1, delta=0; r=2: p=2, delta=0; r>=3: p=2, delta=1.
std::vector<RunEntry> default_runs(int count);

enum class DxRule { Standard, Fine };  // h_S / 2^(r-1)  vs  h_S / 2^r

struct ScheduleConfig {
    std::vector<RunEntry> runs = default_runs(3);
    DxRule dx_rule = DxRule::Standard;
    double dt_factor = 0.25;
    double k_s = 2.0;
    double sample_fraction = 0.1;
    std::uint64_t seed = 0;
    int min_iters = 10;
    int max_iters = 100;
    double tol = 1e-4;
    InterpolatorKind interp = InterpolatorKind::Weno;
    std::optional<ShapeSpec> exact_shape;  // enables the L1 error column
    std::int64_t node_budget = kDefaultNodeBudget;
    int energy_refine = 5;
};

// Nodes with d >= gamma_s reachable from the hull boundary through axis
// neighbours without crossing d < gamma_s; directional sweeps to fixpoint.
std::vector<std::uint8_t> mark_external(const DistanceField& dist, double gamma_s);

// d - gamma_s on external nodes, eikonal-swept inward and negated inside:
// an approximate signed distance whose zero set is the d = gamma_s shell.
ScalarField initial_level_set(const DistanceField& dist, const std::vector<std::uint8_t>& external,
                              double gamma_s);

// Q1 resampling of the coarse solution; evaluation points outside the
// coarse hull are clamped to it.
ScalarField transfer_solution(const ScalarField& coarse, const Grid& fine_grid);

struct RunResult {
    ScalarField phi;
    int iterations = 0;
    double dx = 0.0;
    double final_e2 = 0.0;
    double final_err_s = 0.0;
    std::optional<double> final_l1_error;
    double wall_ms = 0.0;
};

struct LogRow {
    int run = 0;
    MetricsRecord rec;
};

struct ScheduleResult {
    double h_s = 0.0;
    double gamma_s = 0.0;
    std::vector<RunResult> runs;
    std::vector<LogRow> log;
};

ScheduleResult run_schedule(const PointCloud& cloud, const ScheduleConfig& cfg);

}  // namespace lsr
