#pragma once

#include <array>

#include "lsr/grid.hpp"

namespace lsr {

enum class InterpolatorKind { Q1, Weno };

/// One-dimensional 4-node stencil (v_{j-1}, v_j, v_{j+1}, v_{j+2}) with the
/// evaluation abscissa expressed as theta = (x - x_j)/dx in [0, 1].
struct Stencil4 {
    std::array<double, 4> v{};
    double dx = 1.0;
    double theta = 0.0;
};

// Linear weights of the two substencils: C_L = (2-theta)/3, C_R = (1+theta)/3.
struct WenoWeights {
    double left = 0.0;
    double right = 0.0;
};
WenoWeights weno_linear_weights(double theta);

// Regularity indicators (second differences only, scaled by 1/dx^2).
WenoWeights weno_indicators(const Stencil4& st);

// Third-order non-oscillatory blend of the two substencil parabolas.
double weno_1d(const Stencil4& st);

double interp_q1(const ScalarField& f, const Vec& p);

// Dimension-split WENO (z, then y, then x); axes whose outer stencil node
// falls off the grid drop to linear blending in that axis.
double interp_weno(const ScalarField& f, const Vec& p);

double interp(InterpolatorKind kind, const ScalarField& f, const Vec& p);

}  // namespace lsr
