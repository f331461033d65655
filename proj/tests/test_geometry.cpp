#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spraylab/geometry.hpp"
#include "test_support.hpp"

using namespace spraylab;

TEST_CASE("metric norm on built-in charts") {
    const auto euclid = make_euclidean_chart();
    CHECK(metric_norm(euclid, {{0, 0}, {3, 4}}) == Catch::Approx(5.0));
    CHECK(metric_norm(euclid, {{1, 2}, {0, 0}}) == 0.0);

    const auto disk = make_poincare_disk();
    // e^{psi(0)} = 2
    CHECK(metric_norm(disk, {{0, 0}, {1, 0}}) == Catch::Approx(2.0));
    CHECK(metric_norm(disk, {{0.5, 0.1}, {0, 0}}) == 0.0);

    CHECK_THROWS_AS(metric_norm(disk, {{1.5, 0}, {1, 0}}), std::domain_error);
}

TEST_CASE("gauss curvature matches the constant-curvature models") {
    const auto euclid = make_euclidean_chart();
    const auto disk = make_poincare_disk();
    const auto half = make_half_plane();
    const auto sphere = make_sphere_chart();

    CHECK(gauss_curvature(euclid, {0.3, -2.0}) == Catch::Approx(0.0).margin(1e-12));
    CHECK(gauss_curvature(disk, {0.3, 0.1}) == Catch::Approx(-1.0).margin(1e-12));
    CHECK(gauss_curvature(half, {1.0, 2.5}) == Catch::Approx(-1.0).margin(1e-12));
    CHECK(gauss_curvature(sphere, {0.5, -0.2}) == Catch::Approx(1.0).margin(1e-12));

    // Finite-difference Laplacian oracle, independent of the analytic path.
    ScalarField fd;
    fd.value = disk.psi.value;
    fd.fd_step = 1e-4;
    const Vec2 p{0.3, 0.1};
    const double c = disk.conf_factor(p);
    CHECK(-fd.lap(p) / (c * c) == Catch::Approx(-1.0).margin(1e-6));
}

TEST_CASE("curvature is constant across a grid") {
    struct Case {
        ConformalChart chart;
        double expected;
        double lo, hi;
    };
    const Case cases[] = {{make_euclidean_chart(), 0.0, -2.0, 2.0},
                          {make_poincare_disk(), -1.0, -0.6, 0.6},
                          {make_half_plane(), -1.0, 0.3, 2.0},
                          {make_sphere_chart(), 1.0, -2.0, 2.0}};
    for (const auto& c : cases) {
        for (int i = 0; i < 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                const Vec2 p{c.lo + (c.hi - c.lo) * i / 49.0, c.lo + (c.hi - c.lo) * j / 49.0};
                if (!c.chart.inside(p)) continue;
                REQUIRE(gauss_curvature(c.chart, p) == Catch::Approx(c.expected).margin(1e-6));
            }
        }
    }
}

TEST_CASE("gradient norm") {
    const auto euclid = make_euclidean_chart();
    ScalarField fx;
    fx.value = [](Vec2 p) { return p.x; };
    CHECK(grad_norm(euclid, fx, {0.2, 0.7}) == Catch::Approx(1.0));

    ScalarField cst = ScalarField::constant(4.2);
    CHECK(grad_norm(euclid, cst, {0.2, 0.7}) == Catch::Approx(0.0).margin(1e-12));

    const auto disk = make_poincare_disk();
    CHECK(grad_norm(disk, fx, {0, 0}) == Catch::Approx(0.5));
}

TEST_CASE("gradient norm is 1-homogeneous in the field") {
    const auto disk = make_poincare_disk();
    testutil::Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const double scale = rng.uniform(0.1, 8.0);
        ScalarField f;
        f.value = [](Vec2 p) { return std::sin(2 * p.x) + p.y * p.y; };
        ScalarField g;
        g.value = [scale](Vec2 p) { return scale * (std::sin(2 * p.x) + p.y * p.y); };
        const Vec2 p = testutil::random_point_in_disc(rng, {0, 0}, 0.7);
        CHECK(grad_norm(disk, g, p) ==
              Catch::Approx(scale * grad_norm(disk, f, p)).epsilon(1e-6));
    }
}

TEST_CASE("rotate90") {
    const auto euclid = make_euclidean_chart();
    const auto r = rotate90(euclid, {{0, 0}, {1, 0}});
    CHECK(r.v.x == Catch::Approx(0.0).margin(1e-15));
    CHECK(r.v.y == Catch::Approx(1.0));

    const auto disk = make_poincare_disk();
    const auto q = rotate90(disk, {{0, 0}, {2, 0}});
    CHECK(q.v.x == Catch::Approx(0.0).margin(1e-15));
    CHECK(q.v.y == Catch::Approx(2.0));
    CHECK(metric_norm(disk, q) == Catch::Approx(4.0));

    testutil::Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const Vec2 p = testutil::random_point_in_disc(rng, {0, 0}, 0.8);
        const TangentVec w{p, {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
        // norm preserved
        CHECK(metric_norm(disk, rotate90(disk, w)) ==
              Catch::Approx(metric_norm(disk, w)).margin(1e-12));
        // four turns = identity
        TangentVec u = w;
        for (int k = 0; k < 4; ++k) u = rotate90(disk, u);
        CHECK(u.v.x == Catch::Approx(w.v.x).margin(1e-12));
        CHECK(u.v.y == Catch::Approx(w.v.y).margin(1e-12));
    }
}
