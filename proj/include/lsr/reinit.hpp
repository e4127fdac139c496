#pragma once

#include <cstdint>
#include <vector>

#include "lsr/grid.hpp"

namespace lsr {

struct ReinitConfig {
    double dtau = 0.0;
    int max_iters = 0;
    double residual_tol = 1e-3;
    double sign_eps = 0.0;

    // dtau = dx/2, max_iters = 4*ceil(gamma/dx), sign_eps = dx.
    static ReinitConfig defaults(double dx, double gamma);

    void validate() const {
        if (!(dtau > 0.0)) throw ConfigError("reinit: dtau must be positive");
        if (max_iters < 1) throw ConfigError("reinit: max_iters must be >= 1");
    }
};

// Assigns every node with an opposite-sign axis neighbour the signed minimum
// of the per-axis linear crossing distances; returns flags (1 = frozen).
// Throws NoInterfaceError when phi never changes sign.
std::vector<std::uint8_t> interface_one_step(ScalarField& phi);

// Jacobi iterations of phi <- phi - dtau * s * (G(phi) - 1) on the tube
// (ACTIVE + REINIT_HALO) minus frozen nodes; s is the smoothed sign of the
// field at entry and G the sign-matched Godunov upwind gradient norm.
// Returns the number of iterations performed.
int reinit_iterate(ScalarField& phi, const BandMask& band, const std::vector<std::uint8_t>& frozen,
                   const ReinitConfig& cfg);

struct ReinitResult {
    bool had_interface = false;
    int iterations = 0;
};

// One-step assignment, tube iteration, then the cut at +-gamma.
ReinitResult reinitialize(ScalarField& phi, const BandMask& band, double gamma,
                          const ReinitConfig& cfg);

}  // namespace lsr
