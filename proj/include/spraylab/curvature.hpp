// Pointwise evaluation of the curvature scalar Q and the nonnegativity /
// CD(0,N) conditions over grids.
//
// For a metric spray with curvature law k and weight phi the scalar is
//
//   Q(p, theta) = K + k^2 + G(dphi) - (dphi)^2 - E2 k,
//
// where dphi is evaluated on the unit vector, G(.) differentiates along
// the spray flow, and E2 = [V, E1] combines the angle derivative V with
// the derivative E1 along the metric-geodesic flow.  For magnetic sprays
// E2 k reduces to the rotated-gradient pairing
//   E2 k (p, theta) = e^{-psi} (kappa_y cos(theta) - kappa_x sin(theta)),
// whose maximum over theta is |grad kappa|_g; with phi = 0 the minimum of
// Q over directions is then exactly K + kappa^2 - |grad kappa|_g.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spraylab/geometry.hpp"
#include "spraylab/sets.hpp"
#include "spraylab/spray.hpp"

namespace spraylab {

namespace detail {

struct UnitState {
    double x, y, theta;
};

// One classical RK4 step of the unit-bundle flow; with steps of 1e-4 the
// local error is far below every tolerance used on top of it.
template <typename Rhs>
UnitState rk4_step(const Rhs& rhs, UnitState s, double h) {
    auto f = [&rhs](UnitState u) { return rhs(u); };
    const UnitState k1 = f(s);
    const UnitState k2 = f({s.x + h / 2 * k1.x, s.y + h / 2 * k1.y, s.theta + h / 2 * k1.theta});
    const UnitState k3 = f({s.x + h / 2 * k2.x, s.y + h / 2 * k2.y, s.theta + h / 2 * k2.theta});
    const UnitState k4 = f({s.x + h * k3.x, s.y + h * k3.y, s.theta + h * k3.theta});
    return {s.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
            s.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
            s.theta + h / 6 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta)};
}

inline UnitState flow_rhs(const ConformalChart& chart, const SprayField* spray, UnitState s) {
    const Vec2 p{s.x, s.y};
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    const double em = chart.inv_conf(p);
    const Vec2 g = chart.psi.grad(p);
    const double k = spray ? spray->k_eff(s.x, s.y, s.theta) : 0.0;
    return {em * c, em * sn, k + em * (g.y * c - g.x * sn)};
}

// dphi evaluated on the unit vector with angle theta.
inline double dphi_unit(const ConformalChart& chart, UnitState s) {
    if (!chart.has_weight()) return 0.0;
    const Vec2 p{s.x, s.y};
    const Vec2 g = chart.phi_grad(p);
    return chart.inv_conf(p) * (g.x * std::cos(s.theta) + g.y * std::sin(s.theta));
}

}  // namespace detail

struct CurvatureOptions {
    int nx = 64, ny = 64;
    int n_angles = 16;
    double verdict_tol = 1e-6;       // nonnegative iff min >= -verdict_tol
    double magnetic_tol = 1e-8;      // defect above this fails the magnetic test
    double fd_angle = 1e-4;          // step for V = d/dtheta
    double fd_flow = 1e-4;           // arclength step for E1 and the spray flow
};

enum class ConditionVerdict { Nonnegative, Negative, NotMagnetic };

struct CurvatureReport {
    std::vector<Vec2> points;
    std::vector<double> values;      // per-point minimum over directions
    double min_value = std::numeric_limits<double>::infinity();
    Vec2 min_location{};
    double magnetic_defect = 0.0;    // max over grid of the compatibility defect
    ConditionVerdict verdict = ConditionVerdict::Nonnegative;
    CurvatureOptions options;
    std::string condition_name;

    bool holds() const { return verdict == ConditionVerdict::Nonnegative; }
};

// max_theta k - min_theta k over uniformly sampled directions.
inline double magnetic_defect(const ConformalChart& chart, const SprayField& spray, Vec2 p,
                              int n_angles = 16) {
    chart.require_inside(p, "magnetic_defect");
    double lo = 1e300, hi = -1e300;
    for (int a = 0; a < n_angles; ++a) {
        const double v = spray.k_eff(p.x, p.y, 2 * M_PI * a / n_angles);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

namespace detail {

// Derivative of u(x, y, theta) along the metric-geodesic flow.
template <typename U>
double e1_derivative(const ConformalChart& chart, UnitState s, double h, const U& u) {
    auto rhs = [&chart](UnitState q) { return flow_rhs(chart, nullptr, q); };
    const UnitState fwd = rk4_step(rhs, s, h);
    const UnitState bwd = rk4_step(rhs, s, -h);
    return (u(fwd) - u(bwd)) / (2 * h);
}

// E2 k = V(E1 k) - E1(V k) by nested central differences.
inline double e2k_fd(const ConformalChart& chart, const SprayField& spray, UnitState s,
                     const CurvatureOptions& opt) {
    const double da = opt.fd_angle, dh = opt.fd_flow;
    auto kf = [&spray](UnitState q) { return spray.k_eff(q.x, q.y, q.theta); };
    auto e1k = [&](UnitState q) { return e1_derivative(chart, q, dh, kf); };
    auto vk = [&](UnitState q) {
        return (kf({q.x, q.y, q.theta + da}) - kf({q.x, q.y, q.theta - da})) / (2 * da);
    };
    const double v_e1k = (e1k({s.x, s.y, s.theta + da}) - e1k({s.x, s.y, s.theta - da})) / (2 * da);
    const double e1_vk = e1_derivative(chart, s, dh, vk);
    return v_e1k - e1_vk;
}

// Exact magnetic value via the rotated gradient.
inline double e2k_magnetic(const ConformalChart& chart, const SprayField& spray, UnitState s) {
    const Vec2 g = spray.kappa_grad({s.x, s.y});
    return chart.inv_conf({s.x, s.y}) * (g.y * std::cos(s.theta) - g.x * std::sin(s.theta));
}

// Derivative of dphi(gamma') along the spray flow.
inline double gamma_dphi(const ConformalChart& chart, const SprayField& spray, UnitState s,
                         double h) {
    if (!chart.has_weight()) return 0.0;
    auto rhs = [&](UnitState q) { return flow_rhs(chart, &spray, q); };
    const UnitState fwd = rk4_step(rhs, s, h);
    const UnitState bwd = rk4_step(rhs, s, -h);
    return (dphi_unit(chart, fwd) - dphi_unit(chart, bwd)) / (2 * h);
}

inline double vk_fd(const SprayField& spray, UnitState s, double da) {
    if (spray.is_magnetic()) return 0.0;
    return (spray.k_eff(s.x, s.y, s.theta + da) - spray.k_eff(s.x, s.y, s.theta - da)) / (2 * da);
}

}  // namespace detail

// Q(p, theta) for the metric spray with weight phi taken from the chart.
inline double q_scalar(const ConformalChart& chart, const SprayField& spray, Vec2 p, double theta,
                       const CurvatureOptions& opt = {}) {
    chart.require_inside(p, "q_scalar");
    const detail::UnitState s{p.x, p.y, theta};
    const double K = gauss_curvature(chart, p);
    const double k = spray.k_eff(p.x, p.y, theta);
    const double dphi = detail::dphi_unit(chart, s);
    const double gdphi = detail::gamma_dphi(chart, spray, s, opt.fd_flow);
    const double e2k = spray.is_magnetic() ? detail::e2k_magnetic(chart, spray, s)
                                           : detail::e2k_fd(chart, spray, s, opt);
    return K + k * k + gdphi - dphi * dphi - e2k;
}

namespace detail {

// |V k - 2 dphi| maximized over sampled directions: the spray must be
// magnetic for the rescaled metric e^{-4 phi} g before Q means anything.
inline double compat_defect(const ConformalChart& chart, const SprayField& spray, Vec2 p,
                            const CurvatureOptions& opt) {
    double worst = 0.0;
    for (int a = 0; a < opt.n_angles; ++a) {
        const UnitState s{p.x, p.y, 2 * M_PI * a / opt.n_angles};
        const double vk = vk_fd(spray, s, opt.fd_angle);
        worst = std::max(worst, std::fabs(vk - 2 * dphi_unit(chart, s)));
    }
    return worst;
}

template <typename Value>
CurvatureReport grid_report(const ConformalChart& chart, const SprayField& spray,
                            const Region& region, const CurvatureOptions& opt,
                            const std::string& name, bool compat_gate, const Value& value_at) {
    CurvatureReport rep;
    rep.options = opt;
    rep.condition_name = name;

    const BBox box = region_bbox(region);
    const double margin = 2.5 * std::max(opt.fd_angle, opt.fd_flow);
    for (int j = 0; j < opt.ny; ++j) {
        for (int i = 0; i < opt.nx; ++i) {
            const Vec2 p{box.lo.x + box.width() * i / std::max(1, opt.nx - 1),
                         box.lo.y + box.height() * j / std::max(1, opt.ny - 1)};
            if (!region_contains(region, p) || !chart.inside(p)) continue;
            // keep finite-difference stencils inside the chart
            if (!chart.inside({p.x + margin, p.y}) || !chart.inside({p.x - margin, p.y}) ||
                !chart.inside({p.x, p.y + margin}) || !chart.inside({p.x, p.y - margin}))
                continue;
            const double v = value_at(p);
            rep.points.push_back(p);
            rep.values.push_back(v);
            if (v < rep.min_value) {
                rep.min_value = v;
                rep.min_location = p;
            }
            rep.magnetic_defect =
                std::max(rep.magnetic_defect, compat_defect(chart, spray, p, opt));
        }
    }
    if (rep.points.empty()) throw std::invalid_argument(name + ": empty evaluation grid");

    if (compat_gate && rep.magnetic_defect > opt.magnetic_tol)
        rep.verdict = ConditionVerdict::NotMagnetic;
    else
        rep.verdict = rep.min_value >= -opt.verdict_tol ? ConditionVerdict::Nonnegative
                                                        : ConditionVerdict::Negative;
    return rep;
}

}  // namespace detail

// Nonnegative-curvature condition over a grid.  For a magnetic spray with
// no weight the per-point value is the exact K + kappa^2 - |grad kappa|_g;
// otherwise the minimum of Q over sampled directions.
inline CurvatureReport check_nnc(const ConformalChart& chart, const SprayField& spray,
                                 const Region& region, const CurvatureOptions& opt = {}) {
    if (spray.is_magnetic() && !chart.has_weight()) {
        auto value = [&](Vec2 p) {
            const double K = gauss_curvature(chart, p);
            const double kappa = spray.kappa_eff(p);
            const double grad = chart.inv_conf(p) * spray.kappa_grad(p).norm();
            return K + kappa * kappa - grad;
        };
        return detail::grid_report(chart, spray, region, opt, "nonnegative-curvature", true, value);
    }
    auto value = [&](Vec2 p) {
        double lo = 1e300;
        for (int a = 0; a < opt.n_angles; ++a)
            lo = std::min(lo, q_scalar(chart, spray, p, 2 * M_PI * a / opt.n_angles, opt));
        return lo;
    };
    return detail::grid_report(chart, spray, region, opt, "nonnegative-curvature", true, value);
}

// CD(0,N) pointwise condition (N > 2):
//   K + k^2 + G(dphi) - E2 k
//     - ((N-1) V k - 2 dphi)^2 / (4 (N-1) (N-2)) - (dphi)^2 / (N-1) >= 0.
inline CurvatureReport check_cd0n(const ConformalChart& chart, const SprayField& spray, double N,
                                  const Region& region, const CurvatureOptions& opt = {}) {
    if (!(N > 2.0)) throw std::invalid_argument("check_cd0n: requires N > 2");
    auto value_dir = [&](Vec2 p, double theta) {
        const detail::UnitState s{p.x, p.y, theta};
        const double K = gauss_curvature(chart, p);
        const double k = spray.k_eff(p.x, p.y, theta);
        const double dphi = detail::dphi_unit(chart, s);
        const double gdphi = detail::gamma_dphi(chart, spray, s, opt.fd_flow);
        const double e2k = spray.is_magnetic() ? detail::e2k_magnetic(chart, spray, s)
                                               : detail::e2k_fd(chart, spray, s, opt);
        const double vk = detail::vk_fd(spray, s, opt.fd_angle);
        const double b = (N - 1) * vk - 2 * dphi;
        return K + k * k + gdphi - e2k - b * b / (4 * (N - 1) * (N - 2)) -
               dphi * dphi / (N - 1);
    };
    auto value = [&](Vec2 p) {
        double lo = 1e300;
        for (int a = 0; a < opt.n_angles; ++a)
            lo = std::min(lo, value_dir(p, 2 * M_PI * a / opt.n_angles));
        return lo;
    };
    return detail::grid_report(chart, spray, region, opt, "cd(0,n)", false, value);
}

}  // namespace spraylab
