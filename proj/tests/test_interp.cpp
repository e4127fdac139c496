#include <doctest.h>

#include <cmath>
#include <random>

#include "lsr/interp.hpp"
#include "oracles.hpp"

using namespace lsr;

namespace {

Grid unit_grid_2d(double dx) { return build_grid({0, 0, 0}, {2, 2, 0}, 2, dx, 2); }

// Lagrange parabola through (sn[i], vn[i]) evaluated at s.
double lagrange3(double s, const double* sn, const double* vn) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
        double term = vn[i];
        for (int j = 0; j < 3; ++j)
            if (j != i) term *= (s - sn[j]) / (sn[i] - sn[j]);
        acc += term;
    }
    return acc;
}

}  // namespace

TEST_CASE("linear weights at the cell nodes") {
    CHECK(weno_linear_weights(0.0).left == doctest::Approx(2.0 / 3.0).epsilon(1e-16));
    CHECK(weno_linear_weights(0.0).right == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
    for (double t = 0.0; t <= 1.0; t += 0.125) {
        const WenoWeights w = weno_linear_weights(t);
        CHECK(w.left + w.right == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(w.left >= 0.0);
        CHECK(w.right >= 0.0);
    }
}

TEST_CASE("indicator of a pure parabola is 4 a2^2 / dx^2") {
    const double dx = 0.25;
    for (double a2 : {0.5, -1.25, 3.0}) {
        // samples of a2 * s^2 at s = -1, 0, 1, 2
        const Stencil4 st{{a2, 0.0, a2, 4.0 * a2}, dx, 0.3};
        const WenoWeights ind = weno_indicators(st);
        CHECK(ind.left == doctest::Approx(4.0 * a2 * a2 / (dx * dx)).epsilon(1e-14));
        CHECK(ind.right == doctest::Approx(4.0 * a2 * a2 / (dx * dx)).epsilon(1e-14));
    }
}

TEST_CASE("weno_1d reproduces constants and quadratics") {
    std::mt19937_64 rng(5);
    auto u = [&]() { return (rng() >> 11) * 0x1.0p-53 * 4.0 - 2.0; };
    for (int trial = 0; trial < 200; ++trial) {
        const double a0 = u(), a1 = u(), a2 = u();
        const double dx = 0.05 + 0.2 * std::abs(u());
        auto q = [&](double s) { return a0 + a1 * s + a2 * s * s; };
        const double t = 0.5 * (1.0 + std::tanh(u()));  // in (0,1)
        const Stencil4 st{{q(-1), q(0), q(1), q(2)}, dx, t};
        CHECK(weno_1d(st) == doctest::Approx(q(t)).epsilon(1e-12));

        const Stencil4 flat{{a0, a0, a0, a0}, dx, t};
        CHECK(weno_1d(flat) == a0);
    }
}

TEST_CASE("weno_1d stays a convex combination of the substencil parabolas") {
    std::mt19937_64 rng(9);
    auto u = [&]() { return (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    const double sn_l[3] = {-1, 0, 1}, sn_r[3] = {0, 1, 2};
    for (int trial = 0; trial < 500; ++trial) {
        const Stencil4 st{{u(), u(), u(), u()}, 0.1, 0.5 * (1.0 + std::tanh(u()))};
        const double pl = lagrange3(st.theta, sn_l, st.v.data());
        const double pr = lagrange3(st.theta, sn_r, st.v.data() + 1);
        const double w = weno_1d(st);
        CHECK(w >= std::min(pl, pr) - 1e-12);
        CHECK(w <= std::max(pl, pr) + 1e-12);
    }
}

TEST_CASE("kink outside the smooth substencil causes no overshoot") {
    // f = |x + 0.05| sampled at -0.1, 0, 0.1, 0.2: the right substencil is
    // exactly linear, so its weight dominates.
    const double dx = 0.1;
    for (double t = 0.0; t <= 1.0; t += 0.05) {
        const Stencil4 st{{0.05, 0.05, 0.15, 0.25}, dx, t};
        const double w = weno_1d(st);
        CHECK(w >= 0.05 - 1e-12);
        CHECK(w <= 0.15 + 1e-12);
    }
}

TEST_CASE("q1 cardinal and midpoint behaviour") {
    const Grid g = unit_grid_2d(0.5);
    const ScalarField f =
        oracle::field_from(g, [](const Vec& p) { return std::sin(p[0]) + std::cos(p[1]); });
    for (int j = 0; j < g.dims[1]; ++j)
        for (int i = 0; i < g.dims[0]; ++i)
            CHECK(interp_q1(f, g.node(i, j, 0)) == f.at(i, j, 0));

    const Vec cell_mid{g.origin[0] + 1.5 * g.dx, g.origin[1] + 3.5 * g.dx, 0.0};
    const double mean = 0.25 * (f.at(1, 3, 0) + f.at(2, 3, 0) + f.at(1, 4, 0) + f.at(2, 4, 0));
    CHECK(interp_q1(f, cell_mid) == doctest::Approx(mean).epsilon(1e-15));
}

TEST_CASE("q1 reproduces affine fields anywhere") {
    const Grid g = unit_grid_2d(0.3);
    const ScalarField f =
        oracle::field_from(g, [](const Vec& p) { return 2.0 * p[0] - p[1] + 3.0; });
    std::mt19937_64 rng(2);
    auto u = [&]() { return (rng() >> 11) * 0x1.0p-53; };
    for (int t = 0; t < 200; ++t) {
        const Vec p{u() * 2.0, u() * 2.0, 0.0};
        CHECK(interp_q1(f, p) == doctest::Approx(2.0 * p[0] - p[1] + 3.0).epsilon(1e-12));
    }
}

TEST_CASE("weno node exactness in 2d and 3d") {
    const Grid g2 = unit_grid_2d(0.4);
    const ScalarField f2 =
        oracle::field_from(g2, [](const Vec& p) { return std::sin(3 * p[0]) * p[1]; });
    for (int j = 0; j < g2.dims[1]; ++j)
        for (int i = 0; i < g2.dims[0]; ++i)
            CHECK(interp_weno(f2, g2.node(i, j, 0)) ==
                  doctest::Approx(f2.at(i, j, 0)).epsilon(1e-12));

    const Grid g3 = build_grid({0, 0, 0}, {1, 1, 1}, 3, 0.25, 2);
    const ScalarField f3 =
        oracle::field_from(g3, [](const Vec& p) { return std::cos(p[0] + 2 * p[1]) - p[2]; });
    for (int k = 0; k < g3.dims[2]; ++k)
        for (int j = 0; j < g3.dims[1]; ++j)
            for (int i = 0; i < g3.dims[0]; ++i)
                CHECK(interp_weno(f3, g3.node(i, j, k)) ==
                      doctest::Approx(f3.at(i, j, k)).epsilon(1e-12));
}

TEST_CASE("weno reproduces quadratics on interior stencils") {
    const Grid g = unit_grid_2d(0.2);
    auto q = [](const Vec& p) { return p[0] * p[0] + p[1] * p[1]; };
    const ScalarField f = oracle::field_from(g, q);
    std::mt19937_64 rng(4);
    auto u = [&]() { return (rng() >> 11) * 0x1.0p-53; };
    for (int t = 0; t < 300; ++t) {
        // keep one full stencil away from the hull
        const Vec p{0.2 + 1.6 * u(), 0.2 + 1.6 * u(), 0.0};
        CHECK(interp_weno(f, p) == doctest::Approx(q(p)).epsilon(1e-10));
    }

    const Grid g3 = build_grid({0, 0, 0}, {1, 1, 1}, 3, 0.2, 2);
    auto q3 = [](const Vec& p) { return p[0] * p[0] + 0.5 * p[1] * p[1] - p[2] * p[2] + p[0]; };
    const ScalarField f3 = oracle::field_from(g3, q3);
    for (int t = 0; t < 100; ++t) {
        const Vec p{0.9 * u(), 0.9 * u(), 0.9 * u()};
        CHECK(interp_weno(f3, p) == doctest::Approx(q3(p)).epsilon(1e-10));
    }
}

TEST_CASE("two-sided face evaluations agree for both interpolators") {
    const Grid g = unit_grid_2d(0.25);
    const ScalarField f =
        oracle::field_from(g, [](const Vec& p) { return std::sin(5 * p[0]) + sqr(p[1] - 0.7); });
    // face between cell columns 3 and 4
    const double fx = g.origin[0] + 4 * g.dx;
    for (double y = 0.3; y < 1.8; y += 0.17) {
        const double left = interp_weno(f, {std::nextafter(fx, -1e9), y, 0.0});
        const double right = interp_weno(f, {std::nextafter(fx, 1e9), y, 0.0});
        CHECK(std::abs(left - right) < 1e-12);
        const double lq = interp_q1(f, {std::nextafter(fx, -1e9), y, 0.0});
        const double rq = interp_q1(f, {std::nextafter(fx, 1e9), y, 0.0});
        CHECK(std::abs(lq - rq) < 1e-12);
    }
}

TEST_CASE("boundary cells fall back to linear blending and stay exact on affine data") {
    const Grid g = unit_grid_2d(0.5);
    const ScalarField f =
        oracle::field_from(g, [](const Vec& p) { return 1.5 * p[0] - 0.5 * p[1]; });
    const Vec p{g.origin[0] + 0.2 * g.dx, g.origin[1] + 0.7 * g.dx, 0.0};
    CHECK(interp_weno(f, p) == doctest::Approx(1.5 * p[0] - 0.5 * p[1]).epsilon(1e-12));
}

TEST_CASE("interp dispatch and error paths") {
    const Grid g = unit_grid_2d(0.5);
    const ScalarField f = oracle::field_from(g, [](const Vec& p) { return p[0]; });
    const Vec node = g.node(2, 2, 0);
    CHECK(interp(InterpolatorKind::Q1, f, node) == f.at(2, 2, 0));
    CHECK(interp(InterpolatorKind::Weno, f, node) == doctest::Approx(f.at(2, 2, 0)));
    CHECK_THROWS_AS(interp(static_cast<InterpolatorKind>(7), f, node), ConfigError);
    CHECK_THROWS_AS(interp_weno(f, {g.origin[0] - 1.0, 0, 0}), OutOfDomainError);
}
