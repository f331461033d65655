#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spraylab/catalog.hpp"
#include "test_support.hpp"

using namespace spraylab;

TEST_CASE("catalog lists eight entries and all load") {
    const auto& names = catalog_names();
    REQUIRE(names.size() == 8);
    for (const auto& n : names) {
        const auto e = builtin(n);
        CHECK(e.name == n);
        CHECK(region_contains(e.working, e.working.shape == Region::Shape::Disc
                                             ? e.working.center
                                             : e.working.vertices.front()));
        // reference geodesic stays in the domain
        const auto tr = integrate(e.chart, e.spray, e.seed_start, e.seed_theta, e.seed_T, 1e-10);
        CHECK(tr.ok());
    }
    CHECK_THROWS_AS(builtin("no_such_entry"), std::invalid_argument);
}

TEST_CASE("expected condition verdicts") {
    CHECK(builtin("horocycles").expected == ConditionVerdict::Nonnegative);
    CHECK(builtin("hyperbolic_geodesics").expected == ConditionVerdict::Negative);

    CatalogParams params;
    params.r = 0.5;
    params.R = 1.0;
    const auto arcs = builtin("circular_arcs", params);
    CHECK(arcs.expected_min == Catch::Approx(1.0));
    const auto rep = check_nnc(arcs.chart, arcs.spray, arcs.working);
    CHECK(rep.min_value == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("working regions sit inside the chart domains") {
    for (const auto& n : catalog_names()) {
        const auto e = builtin(n);
        const BBox box = region_bbox(e.working);
        testutil::Rng rng(41);
        for (int i = 0; i < 200; ++i) {
            const Vec2 p{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
            if (!region_contains(e.working, p)) continue;
            REQUIRE(e.chart.inside(p));
        }
    }
}

TEST_CASE("norwich closed form") {
    const Vec2 p0 = norwich_closed_form(1, 0, 0);
    CHECK(p0.x == Catch::Approx(1.0));
    CHECK(p0.y == Catch::Approx(0.0).margin(1e-15));

    const Vec2 p1 = norwich_closed_form(1, 0, 1);
    CHECK(p1.x == Catch::Approx(1.6829419696).epsilon(1e-9));
    CHECK(p1.y == Catch::Approx(-1.0806046117).epsilon(1e-9));

    testutil::Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const double t = rng.uniform(-2, 2);
        const Vec2 a1 = norwich_closed_form(1, 0.3, t);
        const Vec2 a2 = norwich_closed_form(2, 0.3, t);
        CHECK(a2.x == Catch::Approx(2 * a1.x).margin(1e-12));
        CHECK(a2.y == Catch::Approx(2 * a1.y).margin(1e-12));
    }
    CHECK_THROWS_AS(norwich_closed_form(0, 0, 1), std::invalid_argument);
}

TEST_CASE("norwich arclength law: euclidean speed a(t^2+1)") {
    const double a = 0.7, b = -0.9;
    for (double t : {-1.8, -0.5, 0.0, 0.4, 1.7}) {
        const double h = 1e-6;
        const Vec2 d = (norwich_closed_form(a, b, t + h) - norwich_closed_form(a, b, t - h)) / (2 * h);
        CHECK(d.norm() == Catch::Approx(a * (t * t + 1)).epsilon(1e-6));
    }
}

TEST_CASE("cotK entry: condition value matches (K + kappa^2)(1 - |grad f|)") {
    CatalogParams params;
    params.chart = "euclidean";
    params.f = "1 + 0.2*x";
    const auto e = builtin("cotK", params);
    CHECK(e.expected == ConditionVerdict::Nonnegative);
    CurvatureOptions opt;
    opt.nx = opt.ny = 65;  // odd grid puts (1, 0), where f is maximal, on the lattice
    const auto rep = check_nnc(e.chart, e.spray, e.working, opt);
    CHECK(rep.holds());
    // kappa = 1/f, |grad f| = 0.2: value = (1/f^2)(1 - 0.2), min at f max = 1.2
    CHECK(rep.min_value == Catch::Approx(0.8 / (1.2 * 1.2)).epsilon(1e-3));
}

TEST_CASE("seiffert working annulus excludes both poles") {
    const auto e = builtin("seiffert");
    CHECK_FALSE(region_contains(e.working, {0, 0}));
    CHECK(region_contains(e.working, {1, 0.1}));
    CHECK_FALSE(region_contains(e.working, {3.2, 0}));
}
