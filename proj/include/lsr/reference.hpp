#pragma once

#include "lsr/distance.hpp"
#include "lsr/evolve.hpp"
#include "lsr/metrics.hpp"
#include "lsr/reinit.hpp"

// Plain single-threaded twins of the OpenMP kernels. They run the same
// per-node arithmetic in index order and exist as the comparison baseline
// for the unit tests and the kernel benchmark.
namespace lsr::ref {

BandMask narrow_band(const ScalarField& phi, double gamma);

void sl_step(const ScalarField& phi, const DistanceField& dist, const BandMask& mask,
             const StepConfig& cfg, double energy_p, ScalarField& out);

int reinit_iterate(ScalarField& phi, const BandMask& band, const std::vector<std::uint8_t>& frozen,
                   const ReinitConfig& cfg);

double energy_2d(const ScalarField& phi, const DistanceField& dist, int p);

double energy_3d(const ScalarField& phi, const DistanceField& dist, int p, int subcell_refine);

double err_on_cloud(const ScalarField& phi, const PointCloud& cloud, InterpolatorKind kind);

}  // namespace lsr::ref
