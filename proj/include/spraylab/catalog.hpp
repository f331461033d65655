// Built-in example configurations: chart + spray + weight + working
// region, each with the expected outcome of the curvature condition and a
// reference geodesic used by the verification suites.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "spraylab/curvature.hpp"
#include "spraylab/expr.hpp"
#include "spraylab/geometry.hpp"
#include "spraylab/sets.hpp"
#include "spraylab/spray.hpp"

namespace spraylab {

struct CatalogParams {
    double r = 0.5;                   // circular_arcs: domain disc radius
    double R = 1.0;                   // circular_arcs: arc radius
    std::string chart = "euclidean";  // cotK: underlying constant-curvature chart
    std::string f = "1 + 0.2*x";      // cotK: argument of cot_K
};

struct CatalogEntry {
    std::string name;
    ConformalChart chart;
    SprayField spray;
    Region working;
    ConditionVerdict expected = ConditionVerdict::Nonnegative;
    double expected_min = 0.0;  // analytic minimum of the condition value
    bool has_expected_min = false;
    std::string notes;
    // reference geodesic: stays in the domain for the stated arclength;
    // used by the consistency suites and as the default violation seed
    Vec2 seed_start{};
    double seed_theta = 0.0;
    double seed_T = 2.0;
};

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "flat_lines",  "horocycles",           "norwich",  "seiffert",
        "circular_arcs", "cotK",               "hyperbolic_geodesics", "kappa_3x"};
    return names;
}

// gamma_{a,b}(t) = a (t^2 + 1) e^{i (t - 2 atan t + b)}: the closed form of
// the kappa = 1/r family on the punctured plane.
inline Vec2 norwich_closed_form(double a, double b, double t) {
    if (!(a > 0.0)) throw std::invalid_argument("norwich_closed_form: a must be positive");
    const double rho = a * (t * t + 1.0);
    const double ang = t - 2.0 * std::atan(t) + b;
    return {rho * std::cos(ang), rho * std::sin(ang)};
}

namespace detail {

inline ConformalChart punctured_plane_chart() {
    auto c = make_euclidean_chart(6.0);
    c.name = "euclidean_punctured";
    c.inside_fn = [b = c.bbox](Vec2 p) { return b.contains(p) && p.norm2() > 0.02 * 0.02; };
    return c;
}

inline ConformalChart annulus_sphere_chart() {
    auto c = make_sphere_chart(3.6);
    c.name = "sphere_annulus";
    c.inside_fn = [b = c.bbox](Vec2 p) {
        const double r2 = p.norm2();
        return b.contains(p) && r2 > 0.15 * 0.15 && r2 < 3.5 * 3.5;
    };
    return c;
}

// Annulus between the given radii as a simple polygon with a thin slit.
inline Region annulus_region(double r_in, double r_out, int n = 96) {
    const double slit = 2e-3;  // angular half width of the slit
    std::vector<Vec2> verts;
    for (int i = 0; i <= n; ++i) {
        const double a = slit + (2 * M_PI - 2 * slit) * i / n;
        verts.push_back({r_out * std::cos(a), r_out * std::sin(a)});
    }
    for (int i = n; i >= 0; --i) {
        const double a = slit + (2 * M_PI - 2 * slit) * i / n;
        verts.push_back({r_in * std::cos(a), r_in * std::sin(a)});
    }
    return Region::polygon(verts);
}

inline double chart_constant_curvature(const std::string& name) {
    if (name == "euclidean") return 0.0;
    if (name == "poincare_disk" || name == "half_plane") return -1.0;
    if (name == "sphere_stereographic" || name == "sphere") return 1.0;
    throw std::invalid_argument("cotK entry needs a constant-curvature builtin chart, got " +
                                name);
}

inline void self_test(const CatalogEntry& e) {
    CurvatureOptions opt;
    opt.nx = opt.ny = 17;  // coarse load-time check of the expected verdict
    const auto rep = check_nnc(e.chart, e.spray, e.working, opt);
    if (rep.verdict != e.expected)
        throw std::logic_error("catalog entry '" + e.name +
                               "' does not reproduce its expected condition verdict");
}

}  // namespace detail

inline CatalogEntry builtin(const std::string& name, const CatalogParams& params = {}) {
    CatalogEntry e;
    e.name = name;

    if (name == "flat_lines") {
        e.chart = make_euclidean_chart();
        e.spray = make_constant_spray(0.0);
        e.working = Region::disc({0, 0}, 2.0);
        e.expected = ConditionVerdict::Nonnegative;
        e.expected_min = 0.0;
        e.has_expected_min = true;
        e.notes = "straight lines on the flat plane";
        e.seed_start = {0, 0};
        e.seed_theta = 0.3;
        e.seed_T = 2.0;
    } else if (name == "horocycles") {
        e.chart = make_half_plane();
        e.spray = make_constant_spray(1.0);
        e.working = Region::disc({0, 1}, 0.45);
        e.expected = ConditionVerdict::Nonnegative;
        e.expected_min = 0.0;  // K + kappa^2 = -1 + 1
        e.has_expected_min = true;
        e.notes = "unit-curvature family on the hyperbolic half-plane";
        e.seed_start = {-2.0, 1.0};
        e.seed_theta = 0.0;
        e.seed_T = 4.0;
    } else if (name == "norwich") {
        e.chart = detail::punctured_plane_chart();
        e.spray = make_magnetic_spray(
            [](Vec2 p) { return 1.0 / p.norm(); },
            [](Vec2 p) {
                const double r3 = std::pow(p.norm(), 3.0);
                return Vec2{-p.x / r3, -p.y / r3};
            });
        e.working = Region::disc({1.3, 0}, 0.6);  // keeps clear of the puncture
        e.expected = ConditionVerdict::Nonnegative;
        e.expected_min = 0.0;  // 1/r^2 - 1/r^2
        e.has_expected_min = true;
        e.notes = "curvature 1/r on the punctured plane; spirals and circles";
        e.seed_start = {1, 0};
        e.seed_theta = -M_PI / 2;
        e.seed_T = 14.0 / 3.0;
    } else if (name == "seiffert") {
        e.chart = detail::annulus_sphere_chart();
        e.spray = make_magnetic_spray(
            [](Vec2 p) { return (1 - p.norm2()) / (1 + p.norm2()); },
            [](Vec2 p) {
                const double d = 1 + p.norm2();
                return Vec2{-4 * p.x / (d * d), -4 * p.y / (d * d)};
            });
        e.working = detail::annulus_region(0.25, 2.9);
        e.expected = ConditionVerdict::Nonnegative;
        e.expected_min = 0.0;  // attained on the equator r = 1
        e.has_expected_min = true;
        e.notes = "curvature = height on the sphere; chart annulus avoids both poles";
        e.seed_start = {0.8, 0};
        e.seed_theta = -M_PI / 2;
        e.seed_T = 2.5;
    } else if (name == "circular_arcs") {
        if (!(params.r > 0.0 && params.R >= params.r))
            throw std::invalid_argument("circular_arcs needs 0 < r <= R");
        auto chart = make_euclidean_chart(params.r);
        chart.name = "euclidean_disc";
        chart.inside_fn = [rr = params.r](Vec2 p) { return p.norm2() < rr * rr; };
        e.chart = chart;
        e.spray = make_constant_spray(1.0 / params.R);
        e.working = Region::disc({0, 0}, 0.9 * params.r);
        e.expected = ConditionVerdict::Nonnegative;
        e.expected_min = 1.0 / (params.R * params.R);
        e.has_expected_min = true;
        e.notes = "arcs of radius R on a disc of radius r";
        e.seed_start = {-0.5 * params.r, 0};
        e.seed_theta = 0.0;
        e.seed_T = 0.8 * params.r;
    } else if (name == "cotK") {
        const double K = detail::chart_constant_curvature(params.chart);
        e.chart = builtin_chart(params.chart);
        const Expression f = Expression::parse(params.f);
        e.spray = make_magnetic_spray([f, K](Vec2 p) { return cot_k(K, f.eval(p.x, p.y)); });
        e.working = Region::disc({0, 0}, params.chart == "poincare_disk" ? 0.5 : 1.0);
        if (params.chart == "half_plane") e.working = Region::disc({0, 1.5}, 0.5);
        e.expected = ConditionVerdict::Nonnegative;
        e.notes = "kappa = cot_K(f); the condition value is (K + kappa^2)(1 - |grad f|_g)";
        e.seed_start = e.working.center;
        e.seed_theta = 0.0;
        e.seed_T = 0.8 * e.working.radius;
    } else if (name == "hyperbolic_geodesics") {
        e.chart = make_half_plane();
        e.spray = make_constant_spray(0.0);
        e.working = Region::disc({0, 1}, 0.45);
        e.expected = ConditionVerdict::Negative;
        e.expected_min = -1.0;  // K alone
        e.has_expected_min = true;
        e.notes = "metric geodesics of the hyperbolic plane; the inequality fails";
        e.seed_start = {0, 1};
        e.seed_theta = 0.0;
        e.seed_T = 2.4;
    } else if (name == "kappa_3x") {
        e.chart = make_euclidean_chart(2.0);
        e.spray = make_magnetic_spray([](Vec2 p) { return 3.0 * p.x; },
                                      [](Vec2) { return Vec2{3.0, 0.0}; });
        e.working = Region::disc({0, 0}, 1.0);
        e.expected = ConditionVerdict::Negative;
        e.expected_min = -3.0;  // 9 x^2 - 3 at x = 0
        e.has_expected_min = true;
        e.notes = "gradient too steep: 9x^2 - 3 is negative near the x = 0 chord";
        e.seed_start = {0, 0.8};
        e.seed_theta = -M_PI / 2;
        e.seed_T = 1.6;
    } else {
        throw std::invalid_argument("unknown catalog entry: " + name);
    }

    detail::self_test(e);
    return e;
}

}  // namespace spraylab
