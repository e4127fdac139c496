#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lsr/cloud.hpp"
#include "lsr/distance.hpp"
#include "lsr/grid.hpp"
#include "lsr/interp.hpp"

namespace lsr {

struct EnergyHistory {
    std::vector<double> values;
    int k_window = 10;
};

struct MetricsRecord {
    int iter = 0;
    double e2 = 0.0;
    double delta_e = 0.0;
    double err_cloud = 0.0;
    double l1_update = 0.0;
    std::optional<double> l1_error;
    double wall_ms = 0.0;
};

// Cells whose corner values are not all of one strict sign (zeros count as
// a sign change), as flattened lower-corner cell ids, ascending.
std::vector<std::int64_t> interface_cells(const ScalarField& phi);

// Front segments from linearly interpolated edge crossings, d^p integrated
// along each segment by the trapezoid rule, then the 1/p root.
double energy_2d(const ScalarField& phi, const DistanceField& dist, int p);

// Subcell midpoint rule at refinement R inside the interface cells; a
// subcell counts when |phi(center)| < (sqrt(3)/2) * dx/R.
double energy_3d(const ScalarField& phi, const DistanceField& dist, int p, int subcell_refine);

double surface_energy(const ScalarField& phi, const DistanceField& dist, int p,
                      int subcell_refine = 5);

// Mean |I[phi](Q)| over the cloud.
double err_on_cloud(const ScalarField& phi, const PointCloud& cloud, InterpolatorKind kind);

// Sum over ACTIVE nodes of |next - prev| * dx^dim.
double l1_update(const ScalarField& prev, const ScalarField& next, const BandMask& band);

// Sum over the tube (ACTIVE + REINIT_HALO) of |phi - exact_sdf| * dx^dim.
double l1_error_vs_exact(const ScalarField& phi, const ShapeSpec& spec, const BandMask& band);

// |mean(last k ending at n-1) - mean(last k ending at n)| / mean(last k
// ending at n), k = min(n, k_window); 1.0 while fewer than two entries exist.
double delta_energy(const EnergyHistory& hist, int n);

enum class StopDecision { Continue, Stop };

StopDecision stopping_check(const EnergyHistory& hist, int n, int min_iters, int max_iters,
                            double tol);

}  // namespace lsr
