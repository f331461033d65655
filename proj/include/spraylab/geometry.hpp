// Conformal-chart surface models and the metric quantities derived from them.
//
// A surface is represented by a single planar chart carrying a conformal
// factor psi, so that g = e^{2 psi} (dx^2 + dy^2).  Every metric quantity
// used elsewhere (norms, rotation, Gauss curvature, gradient norms, area
// density) reduces to a closed-form expression in psi and its derivatives.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace spraylab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 b) const { return {x + b.x, y + b.y}; }
    Vec2 operator-(Vec2 b) const { return {x - b.x, y - b.y}; }
    Vec2 operator*(double a) const { return {x * a, y * a}; }
    Vec2 operator/(double a) const { return {x / a, y / a}; }
    Vec2 operator-() const { return {-x, -y}; }

    double dot(Vec2 b) const { return x * b.x + y * b.y; }
    double cross(Vec2 b) const { return x * b.y - y * b.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    // Counterclockwise quarter turn in chart coordinates.
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double a, Vec2 v) { return v * a; }

inline double chart_dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct BBox {
    Vec2 lo{-1.0, -1.0};
    Vec2 hi{1.0, 1.0};

    bool contains(Vec2 p) const {
        return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y;
    }
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double diameter() const { return std::hypot(width(), height()); }
    Vec2 center() const { return {(lo.x + hi.x) / 2, (lo.y + hi.y) / 2}; }
};

// Scalar field on the chart with optional analytic derivatives.  When a
// derivative callback is absent it is produced by central finite
// differences with step `fd_step` (callers scale it to the chart size).
struct ScalarField {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> gradient;       // optional
    std::function<double(Vec2)> laplacian;    // optional
    double fd_step = 1e-5;

    double operator()(Vec2 p) const { return value(p); }

    Vec2 grad(Vec2 p) const {
        if (gradient) return gradient(p);
        const double h = fd_step;
        return {(value({p.x + h, p.y}) - value({p.x - h, p.y})) / (2 * h),
                (value({p.x, p.y + h}) - value({p.x, p.y - h})) / (2 * h)};
    }

    double lap(Vec2 p) const {
        if (laplacian) return laplacian(p);
        const double h = fd_step;
        const double c = value(p);
        return (value({p.x + h, p.y}) + value({p.x - h, p.y}) +
                value({p.x, p.y + h}) + value({p.x, p.y - h}) - 4 * c) /
               (h * h);
    }

    static ScalarField zero() {
        ScalarField f;
        f.value = [](Vec2) { return 0.0; };
        f.gradient = [](Vec2) { return Vec2{0.0, 0.0}; };
        f.laplacian = [](Vec2) { return 0.0; };
        return f;
    }

    static ScalarField constant(double c) {
        ScalarField f;
        f.value = [c](Vec2) { return c; };
        f.gradient = [](Vec2) { return Vec2{0.0, 0.0}; };
        f.laplacian = [](Vec2) { return 0.0; };
        return f;
    }
};

struct TangentVec {
    Vec2 base;
    Vec2 v;
};

class ConformalChart {
  public:
    std::string name;
    BBox bbox;
    std::function<bool(Vec2)> inside_fn;  // strict interior, bbox included
    ScalarField psi;
    std::optional<ScalarField> weight_phi;
    // e^{psi}; kept separate so the built-ins can avoid exp/log in hot loops.
    std::function<double(Vec2)> conf;

    bool inside(Vec2 p) const { return inside_fn ? inside_fn(p) : bbox.contains(p); }

    void require_inside(Vec2 p, const char* who) const {
        if (!inside(p))
            throw std::domain_error(std::string(who) + ": point (" +
                                    std::to_string(p.x) + ", " + std::to_string(p.y) +
                                    ") outside chart domain of " + name);
    }

    double conf_factor(Vec2 p) const {  // e^{psi(p)}
        return conf ? conf(p) : std::exp(psi.value(p));
    }
    double inv_conf(Vec2 p) const { return 1.0 / conf_factor(p); }

    double phi_value(Vec2 p) const { return weight_phi ? weight_phi->value(p) : 0.0; }
    Vec2 phi_grad(Vec2 p) const { return weight_phi ? weight_phi->grad(p) : Vec2{0, 0}; }
    bool has_weight() const { return weight_phi.has_value(); }

    // Density of the weighted volume form against dx dy: e^{2 psi - phi}.
    double area_density(Vec2 p) const {
        const double c = conf_factor(p);
        return c * c * std::exp(-phi_value(p));
    }
};

// |w|_g = e^{psi} * euclidean norm.
inline double metric_norm(const ConformalChart& chart, const TangentVec& w) {
    chart.require_inside(w.base, "metric_norm");
    return chart.conf_factor(w.base) * w.v.norm();
}

// K = -e^{-2 psi} * laplacian(psi).
inline double gauss_curvature(const ConformalChart& chart, Vec2 p) {
    chart.require_inside(p, "gauss_curvature");
    const double c = chart.conf_factor(p);
    return -chart.psi.lap(p) / (c * c);
}

// |grad f|_g = e^{-psi} * euclidean gradient norm.
inline double grad_norm(const ConformalChart& chart, const ScalarField& f, Vec2 p) {
    chart.require_inside(p, "grad_norm");
    return chart.inv_conf(p) * f.grad(p).norm();
}

// Rotation by +pi/2; conformality makes the chart rotation an isometry.
inline TangentVec rotate90(const ConformalChart& chart, const TangentVec& w) {
    chart.require_inside(w.base, "rotate90");
    return {w.base, w.v.perp()};
}

// The unit tangent vector at p whose g-direction angle is theta.
inline TangentVec unit_vector(const ConformalChart& chart, Vec2 p, double theta) {
    const double s = chart.inv_conf(p);
    return {p, {s * std::cos(theta), s * std::sin(theta)}};
}

inline double direction_angle(const TangentVec& w) { return std::atan2(w.v.y, w.v.x); }

namespace detail {

inline void check_builtin_curvature(const ConformalChart& chart, double expected, BBox box) {
    // Sanity check run at construction: the analytic curvature has to agree
    // with the finite-difference Laplacian of psi on an interior grid.
    const int n = 50;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Vec2 p{box.lo.x + box.width() * i / (n - 1),
                   box.lo.y + box.height() * j / (n - 1)};
            if (!chart.inside(p)) continue;
            const double k = gauss_curvature(chart, p);
            if (!std::isfinite(k) || std::fabs(k - expected) > 1e-6)
                throw std::logic_error(chart.name + ": curvature check failed at (" +
                                       std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
            ScalarField fd;  // independent finite-difference route
            fd.value = chart.psi.value;
            fd.fd_step = 3e-4;
            const double cf = chart.conf_factor(p);
            const double k_fd = -fd.lap(p) / (cf * cf);
            if (std::fabs(k_fd - expected) > 1e-6)
                throw std::logic_error(chart.name + ": FD curvature check failed");
        }
    }
}

}  // namespace detail

inline ConformalChart make_euclidean_chart(double half_extent = 10.0) {
    ConformalChart c;
    c.name = "euclidean";
    c.bbox = {{-half_extent, -half_extent}, {half_extent, half_extent}};
    c.inside_fn = [b = c.bbox](Vec2 p) { return b.contains(p); };
    c.psi = ScalarField::zero();
    c.conf = [](Vec2) { return 1.0; };
    return c;
}

// psi = log(2 / (1 - r^2)), K = -1 on the unit disc.
inline ConformalChart make_poincare_disk() {
    ConformalChart c;
    c.name = "poincare_disk";
    c.bbox = {{-1, -1}, {1, 1}};
    c.inside_fn = [](Vec2 p) { return p.norm2() < 1.0; };
    c.psi.value = [](Vec2 p) { return std::log(2.0 / (1.0 - p.norm2())); };
    c.psi.gradient = [](Vec2 p) {
        const double d = 1.0 - p.norm2();
        return Vec2{2 * p.x / d, 2 * p.y / d};
    };
    c.psi.laplacian = [](Vec2 p) {
        const double d = 1.0 - p.norm2();
        return 4.0 / (d * d);
    };
    c.conf = [](Vec2 p) { return 2.0 / (1.0 - p.norm2()); };
    detail::check_builtin_curvature(c, -1.0, {{-0.5, -0.5}, {0.5, 0.5}});
    return c;
}

// psi = -log y on the upper half-plane, K = -1.
inline ConformalChart make_half_plane(double half_extent = 16.0) {
    ConformalChart c;
    c.name = "half_plane";
    c.bbox = {{-half_extent, 0.0}, {half_extent, half_extent}};
    c.inside_fn = [b = c.bbox](Vec2 p) { return p.y > 0.0 && b.contains(p); };
    c.psi.value = [](Vec2 p) { return -std::log(p.y); };
    c.psi.gradient = [](Vec2 p) { return Vec2{0.0, -1.0 / p.y}; };
    c.psi.laplacian = [](Vec2 p) { return 1.0 / (p.y * p.y); };
    c.conf = [](Vec2 p) { return 1.0 / p.y; };
    detail::check_builtin_curvature(c, -1.0, {{-1.0, 0.4}, {1.0, 2.4}});
    return c;
}

// psi = log(2 / (1 + r^2)): stereographic chart of the unit sphere, K = +1.
// The chart misses one point (the pole at r = infinity); keep a finite bbox.
inline ConformalChart make_sphere_chart(double half_extent = 6.0) {
    ConformalChart c;
    c.name = "sphere_stereographic";
    c.bbox = {{-half_extent, -half_extent}, {half_extent, half_extent}};
    c.inside_fn = [b = c.bbox](Vec2 p) { return b.contains(p); };
    c.psi.value = [](Vec2 p) { return std::log(2.0 / (1.0 + p.norm2())); };
    c.psi.gradient = [](Vec2 p) {
        const double d = 1.0 + p.norm2();
        return Vec2{-2 * p.x / d, -2 * p.y / d};
    };
    c.psi.laplacian = [](Vec2 p) {
        const double d = 1.0 + p.norm2();
        return -4.0 / (d * d);
    };
    c.conf = [](Vec2 p) { return 2.0 / (1.0 + p.norm2()); };
    detail::check_builtin_curvature(c, 1.0, {{-2.0, -2.0}, {2.0, 2.0}});
    return c;
}

inline ConformalChart builtin_chart(const std::string& name) {
    if (name == "euclidean") return make_euclidean_chart();
    if (name == "poincare_disk") return make_poincare_disk();
    if (name == "half_plane") return make_half_plane();
    if (name == "sphere_stereographic" || name == "sphere") return make_sphere_chart();
    throw std::invalid_argument("unknown builtin chart: " + name);
}

}  // namespace spraylab
