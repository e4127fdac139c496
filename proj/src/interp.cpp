#include "lsr/interp.hpp"

#include <cmath>

namespace lsr {

WenoWeights weno_linear_weights(double theta) {
    return {(2.0 - theta) / 3.0, (1.0 + theta) / 3.0};
}

WenoWeights weno_indicators(const Stencil4& st) {
    return {sqr(st.v[0] - 2.0 * st.v[1] + st.v[2]) / (st.dx * st.dx),
            sqr(st.v[1] - 2.0 * st.v[2] + st.v[3]) / (st.dx * st.dx)};
}

double weno_1d(const Stencil4& st) {
    const double t = st.theta;
    const double vm = st.v[0], v0 = st.v[1], vp = st.v[2], vpp = st.v[3];

    // Substencil parabolas in the local coordinate t.
    const double pl = v0 + t * (0.5 * (vp - vm)) + t * t * (0.5 * (vm - 2.0 * v0 + vp));
    const double pr = v0 + t * (0.5 * (-3.0 * v0 + 4.0 * vp - vpp)) +
                      t * t * (0.5 * (v0 - 2.0 * vp + vpp));

    const WenoWeights ind = weno_indicators(st);
    const WenoWeights c = weno_linear_weights(t);
    const double eps = st.dx * st.dx;
    const double al = c.left / sqr(ind.left + eps);
    const double ar = c.right / sqr(ind.right + eps);
    const double wl = al / (al + ar);
    const double wr = ar / (al + ar);
    return wl * pl + wr * pr;
}

namespace {

struct AxisStencil {
    int base = 0;    // first node index used along this axis
    int count = 2;   // 4 for the full WENO stencil, 2 for the linear fallback
    double theta = 0.0;
};

AxisStencil axis_stencil(const Grid& g, int axis, int cell, double coord) {
    AxisStencil s;
    s.theta = (coord - (g.origin[axis] + cell * g.dx)) / g.dx;
    if (cell - 1 >= 0 && cell + 2 <= g.dims[axis] - 1) {
        s.base = cell - 1;
        s.count = 4;
    } else {
        s.base = cell;
        s.count = 2;
    }
    return s;
}

double blend_1d(const AxisStencil& s, const double* v, double dx) {
    if (s.count == 2) return (1.0 - s.theta) * v[0] + s.theta * v[1];
    return weno_1d(Stencil4{{v[0], v[1], v[2], v[3]}, dx, s.theta});
}

}  // namespace

double interp_q1(const ScalarField& f, const Vec& p) {
    const Grid& g = f.grid;
    const Index3 c = locate_cell(g, p);
    double t[3] = {0.0, 0.0, 0.0};
    for (int d = 0; d < g.dim; ++d) t[d] = (p[d] - (g.origin[d] + c[d] * g.dx)) / g.dx;

    double value = 0.0;
    const int kz = g.dim == 3 ? 1 : 0;
    for (int dk = 0; dk <= kz; ++dk) {
        for (int dj = 0; dj <= 1; ++dj) {
            for (int di = 0; di <= 1; ++di) {
                const double w = (di ? t[0] : 1.0 - t[0]) * (dj ? t[1] : 1.0 - t[1]) *
                                 (g.dim == 3 ? (dk ? t[2] : 1.0 - t[2]) : 1.0);
                value += w * f.at(c[0] + di, c[1] + dj, c[2] + dk);
            }
        }
    }
    return value;
}

double interp_weno(const ScalarField& f, const Vec& p) {
    const Grid& g = f.grid;
    const Index3 c = locate_cell(g, p);
    const AxisStencil sx = axis_stencil(g, 0, c[0], p[0]);
    const AxisStencil sy = axis_stencil(g, 1, c[1], p[1]);

    if (g.dim == 2) {
        double col[4];
        for (int a = 0; a < sx.count; ++a) {
            double line[4];
            for (int b = 0; b < sy.count; ++b) line[b] = f.at(sx.base + a, sy.base + b, 0);
            col[a] = blend_1d(sy, line, g.dx);
        }
        return blend_1d(sx, col, g.dx);
    }

    const AxisStencil sz = axis_stencil(g, 2, c[2], p[2]);
    double col[4];
    for (int a = 0; a < sx.count; ++a) {
        double plane[4];
        for (int b = 0; b < sy.count; ++b) {
            double line[4];
            for (int e = 0; e < sz.count; ++e) line[e] = f.at(sx.base + a, sy.base + b, sz.base + e);
            plane[b] = blend_1d(sz, line, g.dx);
        }
        col[a] = blend_1d(sy, plane, g.dx);
    }
    return blend_1d(sx, col, g.dx);
}

double interp(InterpolatorKind kind, const ScalarField& f, const Vec& p) {
    switch (kind) {
        case InterpolatorKind::Q1: return interp_q1(f, p);
        case InterpolatorKind::Weno: return interp_weno(f, p);
    }
    throw ConfigError("interp: unknown interpolator kind");
}

}  // namespace lsr
