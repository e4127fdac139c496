#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lsr/evolve.hpp"
#include "oracles.hpp"

using namespace lsr;

namespace {

struct Setup {
    Grid grid;
    DistanceField dist;
    BandMask band;
    StepConfig cfg;
};

Setup make_setup_2d(const ScalarField& phi, const std::function<double(const Vec&)>& d_fun,
                    double dt) {
    Setup s;
    s.grid = phi.grid;
    s.dist.sentinel = 10.0 * s.grid.diagonal();
    s.dist.field = oracle::field_from(s.grid, d_fun);
    s.dist.exact.assign(static_cast<std::size_t>(s.grid.num_nodes()), 0);
    s.cfg.band = default_band_params(s.grid.dim, s.grid.dx);
    s.band = narrow_band(phi, s.cfg.band.gamma);
    s.cfg.dt = dt;
    return s;
}

}  // namespace

TEST_CASE("tangent basis matches the closed forms") {
    const TangentBasis t2 = tangent_basis(2, {1, 0, 0});
    CHECK(t2.v1 == Vec{0, -1, 0});

    const TangentBasis ty = tangent_basis(3, {0, 1, 0});
    CHECK(ty.v1 == Vec{1, 0, 0});
    CHECK(ty.v2 == Vec{0, 0, 1});

    const TangentBasis tx = tangent_basis(3, {1, 0, 0});
    CHECK(norm(tx.v1 - Vec{0, 0, 1}) < 1e-15);
    CHECK(norm(tx.v2 - Vec{0, 1, 0}) < 1e-15);
}

TEST_CASE("tangent basis is orthonormal and orthogonal to the gradient") {
    std::mt19937_64 rng(12);
    auto u = [&]() { return (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    for (int t = 0; t < 300; ++t) {
        const Vec grad{u(), u(), u()};
        if (norm(grad) < 1e-3) continue;
        const TangentBasis tb = tangent_basis(3, grad);
        CHECK(std::abs(norm(tb.v1) - 1.0) < 1e-10);
        CHECK(std::abs(norm(tb.v2) - 1.0) < 1e-10);
        CHECK(std::abs(dot(tb.v1, tb.v2)) < 1e-10);
        CHECK(std::abs(dot(tb.v1, grad)) / norm(grad) < 1e-10);
        CHECK(std::abs(dot(tb.v2, grad)) / norm(grad) < 1e-10);

        const Vec g2{u(), u(), 0.0};
        if (norm(g2) < 1e-3) continue;
        const TangentBasis tb2 = tangent_basis(2, g2);
        CHECK(std::abs(norm(tb2.v1) - 1.0) < 1e-10);
        CHECK(std::abs(dot(tb2.v1, g2)) / norm(g2) < 1e-10);
    }
}

TEST_CASE("scale factor") {
    CHECK(scale_factor(0.7, 123.0, 1) == 1.0);
    CHECK(scale_factor(0.7, -1.0, 1) == 1.0);
    CHECK(scale_factor(0.2, 0.1, 2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(scale_factor(0.0, 0.1, 2) == 0.0);
    CHECK_THROWS_AS(scale_factor(0.2, 0.0, 2), Error);
}

TEST_CASE("constant distance and delta = 0 make the step an identity on active nodes") {
    const Grid g = build_grid({-1, -1, 0}, {1, 1, 0}, 2, 0.1, 3);
    const ShapeSpec circle{ShapeKind::Circle, 0.7, {0, 0, 0}, 8};
    const ScalarField phi =
        oracle::field_from(g, [&](const Vec& p) { return exact_sdf(circle, p); });
    Setup s = make_setup_2d(phi, [](const Vec&) { return 0.5; }, 0.025);
    s.cfg.p = 1;
    s.cfg.delta = 0.0;

    ScalarField next;
    sl_step(phi, s.dist, s.band, s.cfg, 1.0, next);
    for (std::int64_t id = 0; id < g.num_nodes(); ++id)
        CHECK(std::abs(next.values[static_cast<std::size_t>(id)] -
                       phi.values[static_cast<std::size_t>(id)]) < 1e-12);
}

TEST_CASE("pure advection along a linear distance gradient shifts phi by dt") {
    const Grid g = build_grid({-1, -1, 0}, {1, 1, 0}, 2, 0.05, 3);
    const ScalarField phi = oracle::field_from(g, [](const Vec& p) { return p[0]; });
    Setup s = make_setup_2d(phi, [](const Vec& p) { return p[0] + 10.0; }, 0.1);
    s.cfg.p = 1;
    s.cfg.delta = 0.0;

    ScalarField next;
    sl_step(phi, s.dist, s.band, s.cfg, 1.0, next);
    for (std::int64_t id = 0; id < g.num_nodes(); ++id) {
        const Index3 c = g.unflatten(id);
        if (s.band.state[static_cast<std::size_t>(id)] != NodeState::Active) continue;
        if (c[0] < 2 || c[0] > g.dims[0] - 3 || c[1] < 2 || c[1] > g.dims[1] - 3) continue;
        const double x = g.node(c[0], c[1], 0)[0];
        if (std::abs(x) > s.cfg.band.beta) continue;  // cutoff weight 1 only inside beta
        CHECK(next.values[static_cast<std::size_t>(id)] ==
              doctest::Approx(x + 0.1).epsilon(1e-12));
    }
}

TEST_CASE("zero field takes the neighbour-average fallback and stays zero") {
    const Grid g = build_grid({-1, -1, 0}, {1, 1, 0}, 2, 0.1, 3);
    const ScalarField phi = oracle::field_from(g, [](const Vec&) { return 0.0; });
    Setup s = make_setup_2d(phi, [](const Vec& p) { return 1.0 + p[1]; }, 0.05);
    s.cfg.p = 1;

    ScalarField next;
    sl_step(phi, s.dist, s.band, s.cfg, 1.0, next);
    for (double v : next.values) CHECK(v == 0.0);
}

TEST_CASE("fallback triggers exactly at the gradient threshold") {
    const Grid g = build_grid({-1, -1, 0}, {1, 1, 0}, 2, 0.05, 3);
    const double dt = 0.1;
    const double threshold = 1e-3 * dt;

    auto run_slope = [&](double slope) {
        const ScalarField phi =
            oracle::field_from(g, [&](const Vec& p) { return slope * p[0]; });
        Setup s = make_setup_2d(phi, [](const Vec& p) { return p[0] + 10.0; }, dt);
        s.cfg.p = 1;
        ScalarField next;
        sl_step(phi, s.dist, s.band, s.cfg, 1.0, next);
        // probe a node well inside the domain with cutoff weight 1
        const Index3 c = locate_cell(g, {0.001, 0.001, 0});
        return std::make_pair(phi.at(c[0], c[1], 0), next.at(c[0], c[1], 0));
    };

    // below: neighbour average of a linear field equals the node value
    auto below = run_slope(0.99 * threshold);
    CHECK(below.second == doctest::Approx(below.first).epsilon(1e-15));
    // above: the foot shifts by dt along x
    auto above = run_slope(1.01 * threshold);
    CHECK(above.second ==
          doctest::Approx(above.first + 1.01 * threshold * dt).epsilon(1e-6));
}

TEST_CASE("3d diffusion displacements cancel for affine phi") {
    const Grid g = build_grid({-1, -1, -1}, {1, 1, 1}, 3, 0.125, 3);
    const ScalarField phi =
        oracle::field_from(g, [](const Vec& p) { return 0.3 * p[0] + 0.2 * p[1] - 0.5 * p[2]; });
    Setup s;
    s.grid = g;
    s.dist.sentinel = 10.0 * g.diagonal();
    s.dist.field = oracle::field_from(g, [](const Vec&) { return 0.25; });
    s.dist.exact.assign(static_cast<std::size_t>(g.num_nodes()), 0);
    s.cfg.band = default_band_params(3, g.dx);
    s.band = narrow_band(phi, s.cfg.band.gamma);
    s.cfg.dt = 0.05;
    s.cfg.p = 2;
    s.cfg.delta = 1.0;

    ScalarField next;
    sl_step(phi, s.dist, s.band, s.cfg, 0.5, next);
    for (const std::int64_t id : s.band.active) {
        const Index3 c = g.unflatten(id);
        bool interior = true;
        for (int d = 0; d < 3; ++d) interior = interior && c[d] >= 2 && c[d] <= g.dims[d] - 3;
        if (!interior) continue;
        CHECK(std::abs(next.values[static_cast<std::size_t>(id)] -
                       phi.values[static_cast<std::size_t>(id)]) < 1e-10);
    }
}

TEST_CASE("non-active nodes copy phi") {
    const Grid g = build_grid({-1, -1, 0}, {1, 1, 0}, 2, 0.1, 3);
    const ShapeSpec circle{ShapeKind::Circle, 0.6, {0, 0, 0}, 8};
    const ScalarField phi =
        oracle::field_from(g, [&](const Vec& p) { return exact_sdf(circle, p); });
    Setup s = make_setup_2d(phi, [](const Vec& p) { return 0.3 + 0.1 * p[1]; }, 0.02);
    s.cfg.p = 1;
    s.cfg.delta = 0.0;

    ScalarField next;
    sl_step(phi, s.dist, s.band, s.cfg, 1.0, next);
    for (std::int64_t id = 0; id < g.num_nodes(); ++id)
        if (s.band.state[static_cast<std::size_t>(id)] != NodeState::Active)
            CHECK(next.values[static_cast<std::size_t>(id)] ==
                  phi.values[static_cast<std::size_t>(id)]);
}

TEST_CASE("a NaN distance value surfaces as a numerical failure naming the node") {
    const Grid g = build_grid({-1, -1, 0}, {1, 1, 0}, 2, 0.1, 3);
    const ShapeSpec circle{ShapeKind::Circle, 0.6, {0, 0, 0}, 8};
    const ScalarField phi =
        oracle::field_from(g, [&](const Vec& p) { return exact_sdf(circle, p); });
    Setup s = make_setup_2d(phi, [](const Vec&) { return 0.5; }, 0.02);
    s.cfg.p = 2;
    s.cfg.delta = 1.0;
    REQUIRE(!s.band.active.empty());
    const std::int64_t poisoned = s.band.active[s.band.active.size() / 2];
    s.dist.field.values[static_cast<std::size_t>(poisoned)] =
        std::numeric_limits<double>::quiet_NaN();

    ScalarField next;
    CHECK_THROWS_AS(sl_step(phi, s.dist, s.band, s.cfg, 1.0, next), NumericalError);
}

TEST_CASE("step config validation") {
    StepConfig cfg;
    cfg.band = BandParams{0.4, 0.2};
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.dt = 0.1;
    cfg.p = 3;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.p = 2;
    cfg.delta = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.delta = 1.0;
    CHECK_NOTHROW(cfg.validate());
}
