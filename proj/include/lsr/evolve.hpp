#pragma once

#include "lsr/distance.hpp"
#include "lsr/grid.hpp"
#include "lsr/interp.hpp"

namespace lsr {

/// Orthonormal basis of the level-set tangent space. In 2d only v1 is used;
/// in 3d v1 and v2 span the plane orthogonal to the gradient.
struct TangentBasis {
    Vec v1{0, 0, 0};
    Vec v2{0, 0, 0};
};

struct StepConfig {
    int p = 1;
    double delta = 0.0;
    double dt = 0.0;
    InterpolatorKind interp = InterpolatorKind::Weno;
    double fallback_c = 1e-3;
    double fallback_alpha = 1.0;
    BandParams band{};

    void validate() const {
        if (p != 1 && p != 2) throw ConfigError("step: p must be 1 or 2");
        if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
        if (delta < 0.0 || delta > 1.0) throw ConfigError("step: delta must be in [0, 1]");
        band.validate();
    }
};

// 2d: v1 = (g_y, -g_x)/|g|. 3d: the regularized eigenvector pair, with the
// fixed axes (1,0,0), (0,0,1) when sqrt(g_x^2 + g_z^2) degenerates.
TangentBasis tangent_basis(int dim, const Vec& grad);

// (d_j / E_p)^(p-1); 1 when p == 1.
double scale_factor(double d_j, double energy_p, int p);

// One semi-Lagrangian step on the ACTIVE nodes, blended by the cutoff
// weight; all other nodes copy phi. Writes into `out` (the double buffer).
void sl_step(const ScalarField& phi, const DistanceField& dist, const BandMask& mask,
             const StepConfig& cfg, double energy_p, ScalarField& out);

}  // namespace lsr
