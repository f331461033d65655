// Metric sprays on conformal charts: geodesic integration, exponential
// maps, and the shooting-based inverse exponential.
//
// A spray is given by its geodesic-curvature law k(x, y, theta) on the
// unit tangent bundle.  Unit-speed spray geodesics solve, in chart
// coordinates with t the g-arclength,
//
//   dx/dt     = e^{-psi} cos(theta)
//   dy/dt     = e^{-psi} sin(theta)
//   dtheta/dt = k(x, y, theta) + e^{-psi} (psi_y cos(theta) - psi_x sin(theta)),
//
// where positive k bends the curve toward the counterclockwise normal
// (-sin theta, cos theta).  The correction term is what makes k = 0
// reproduce the metric geodesics: on the half-plane it reduces to the
// classical flow dtheta/dt = -cos(theta), and the unit-curvature family
// contains the horizontal horocycles run to the right.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spraylab/geometry.hpp"
#include "spraylab/ode.hpp"

namespace spraylab {

struct SprayField {
    // Geodesic curvature of the unit-speed geodesic through (x, y) with
    // g-direction angle theta, in units of 1/length of g.
    std::function<double(double, double, double)> k;

    // Set when k is direction-independent; enables the exact magnetic
    // formulas in the curvature module.
    std::function<double(Vec2)> magnetic_kappa;
    std::function<Vec2(Vec2)> magnetic_kappa_grad;  // optional

    bool reversed = false;

    bool is_magnetic() const { return static_cast<bool>(magnetic_kappa); }

    // Effective curvature law after accounting for the reversal flag: the
    // family traversed backwards has the opposite signed curvature at the
    // opposite direction.
    double k_eff(double x, double y, double theta) const {
        return reversed ? -k(x, y, theta + M_PI) : k(x, y, theta);
    }

    double kappa_eff(Vec2 p) const { return reversed ? -magnetic_kappa(p) : magnetic_kappa(p); }

    Vec2 kappa_grad(Vec2 p, double fd_step = 1e-6) const {
        Vec2 g;
        if (magnetic_kappa_grad) {
            g = magnetic_kappa_grad(p);
        } else {
            const double h = fd_step;
            g = {(magnetic_kappa({p.x + h, p.y}) - magnetic_kappa({p.x - h, p.y})) / (2 * h),
                 (magnetic_kappa({p.x, p.y + h}) - magnetic_kappa({p.x, p.y - h})) / (2 * h)};
        }
        return reversed ? -g : g;
    }
};

inline SprayField make_magnetic_spray(std::function<double(Vec2)> kappa,
                                      std::function<Vec2(Vec2)> kappa_grad = nullptr,
                                      bool reversed = false) {
    SprayField s;
    s.k = [kappa](double x, double y, double) { return kappa({x, y}); };
    s.magnetic_kappa = std::move(kappa);
    s.magnetic_kappa_grad = std::move(kappa_grad);
    s.reversed = reversed;
    return s;
}

inline SprayField make_constant_spray(double kappa, bool reversed = false) {
    SprayField s;
    s.k = [kappa](double, double, double) { return kappa; };
    s.magnetic_kappa = [kappa](Vec2) { return kappa; };
    s.magnetic_kappa_grad = [](Vec2) { return Vec2{0, 0}; };
    s.reversed = reversed;
    return s;
}

inline SprayField reverse(const SprayField& s) {
    SprayField r = s;
    r.reversed = !s.reversed;
    return r;
}

// Checks that a spray claiming to be magnetic really has a
// direction-independent law: samples angles at random chart points.
template <typename Rng>
double magnetic_defect_sample(const ConformalChart& chart, const SprayField& spray, Rng&& uniform,
                              int n_points = 100, int n_angles = 16) {
    double worst = 0.0;
    int found = 0;
    for (int it = 0; it < n_points * 20 && found < n_points; ++it) {
        Vec2 p{uniform(chart.bbox.lo.x, chart.bbox.hi.x), uniform(chart.bbox.lo.y, chart.bbox.hi.y)};
        if (!chart.inside(p)) continue;
        ++found;
        double lo = 1e300, hi = -1e300;
        for (int a = 0; a < n_angles; ++a) {
            const double v = spray.k(p.x, p.y, 2 * M_PI * a / n_angles);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

enum class TrajectoryStatus { Ok, ExitedDomain, StepUnderflow };

// A sampled unit-speed spray geodesic.  Samples sit at the integrator's
// accepted steps; interpolation between them is cubic Hermite, so the
// trajectory can be queried at any arclength it covers.
struct Trajectory {
    struct Sample {
        double t;  // signed g-arclength from the start
        double x, y, theta;
    };

    std::vector<Sample> samples;            // traversal order, t monotone
    std::vector<OdeStep<3>> steps;          // dense-output support
    TrajectoryStatus status = TrajectoryStatus::Ok;
    double t_end = 0.0;                     // last arclength reached
    int n_accepted = 0;
    int n_rejected = 0;

    bool ok() const { return status == TrajectoryStatus::Ok; }
    bool exited() const { return status == TrajectoryStatus::ExitedDomain; }

    Sample state(double t) const {
        OdeResult<3> view;  // cheap facade over the stored steps
        view.steps = steps;
        const auto y = view.at(t);
        return {t, y[0], y[1], y[2]};
    }

    Vec2 point(double t) const {
        const auto s = state(t);
        return {s.x, s.y};
    }

    Sample endpoint() const { return samples.back(); }

    // n samples uniformly spaced in arclength over the covered range.
    std::vector<Sample> resample(int n) const {
        std::vector<Sample> out;
        out.reserve(n);
        const double t0 = samples.front().t;
        const double t1 = t_end;
        OdeResult<3> view;
        view.steps = steps;
        for (int i = 0; i < n; ++i) {
            const double t = t0 + (t1 - t0) * i / (n - 1);
            const auto y = view.at(t);
            out.push_back({t, y[0], y[1], y[2]});
        }
        return out;
    }
};

namespace detail {

struct SprayRhs {
    const ConformalChart* chart;
    const SprayField* spray;

    void operator()(const double* s, double* d) const {
        const Vec2 p{s[0], s[1]};
        const double c = std::cos(s[2]);
        const double sn = std::sin(s[2]);
        const double em = chart->inv_conf(p);  // e^{-psi}
        const Vec2 g = chart->psi.grad(p);
        d[0] = em * c;
        d[1] = em * sn;
        d[2] = spray->k_eff(s[0], s[1], s[2]) + em * (g.y * c - g.x * sn);
    }
};

}  // namespace detail

// Integrates the unit-speed spray geodesic from `start` with initial
// direction angle theta0 over signed arclength T.  If the trajectory
// leaves the chart domain it is truncated at the crossing (bisected on
// the dense output to ~1e-12 of arclength) and flagged.
inline Trajectory integrate(const ConformalChart& chart, const SprayField& spray, Vec2 start,
                            double theta0, double T, double tol = 1e-10, double max_step = 0.0) {
    chart.require_inside(start, "integrate");
    detail::SprayRhs rhs{&chart, &spray};
    auto f = [&rhs](const double* s, double* d) { rhs(s, d); };
    auto outside = [&chart](const std::array<double, 3>& y) {
        return !chart.inside({y[0], y[1]});
    };
    auto res = integrate_ode<3>(f, {start.x, start.y, theta0}, T, tol, tol, outside, 2000000,
                                max_step);

    Trajectory tr;
    tr.n_accepted = res.n_accepted;
    tr.n_rejected = res.n_rejected;
    tr.steps = std::move(res.steps);
    tr.t_end = res.t_end;

    if (res.status == OdeStatus::Stopped) {
        // Bisect the last step down to the domain boundary.
        auto& last = tr.steps.back();
        double lo = last.t0, hi = last.t1;
        for (int i = 0; i < 60; ++i) {
            const double mid = (lo + hi) / 2;
            const auto y = last.interpolate(mid);
            if (chart.inside({y[0], y[1]})) lo = mid; else hi = mid;
        }
        const auto y = last.interpolate(lo);
        last.t1 = lo;
        last.y1 = y;
        tr.t_end = lo;
        tr.status = TrajectoryStatus::ExitedDomain;
    } else if (res.status == OdeStatus::StepUnderflow) {
        tr.status = TrajectoryStatus::StepUnderflow;
    }

    for (const auto& st : tr.steps) tr.samples.push_back({st.t0, st.y0[0], st.y0[1], st.y0[2]});
    const auto& lastst = tr.steps.back();
    tr.samples.push_back({lastst.t1, lastst.y1[0], lastst.y1[1], lastst.y1[2]});
    return tr;
}

// exp(x, v): endpoint of the unit-speed geodesic from x in direction v
// after arclength |v|_g.  exp(x, 0) = x.
inline Vec2 exp_map(const ConformalChart& chart, const SprayField& spray, Vec2 x,
                    const TangentVec& v, double tol = 1e-10) {
    const double len = metric_norm(chart, {x, v.v});
    if (len == 0.0) return x;
    const double theta = std::atan2(v.v.y, v.v.x);
    const Trajectory tr = integrate(chart, spray, x, theta, len, tol);
    if (!tr.ok()) throw std::domain_error("exp_map: geodesic left the chart domain");
    const auto e = tr.endpoint();
    return {e.x, e.y};
}

struct ShootResult {
    bool converged = false;
    double theta = 0.0;   // initial direction angle
    double length = 0.0;  // g-arclength, equals |v|_g
    double residual = 0.0;
    int iterations = 0;
};

namespace detail {

// Lean endpoint evaluation for the shooting loop: same Dormand-Prince
// stepping as integrate() but with no dense output and no allocation.
struct RawEnd {
    Vec2 p{};
    double theta_end = 0.0;
    bool ok = false;
};

inline RawEnd integrate_raw(const ConformalChart& chart, const SprayField& spray, Vec2 x,
                            double theta, double T, double tol) {
    SprayRhs rhs{&chart, &spray};
    auto f = [&rhs](const double* s, double* d) { rhs(s, d); };
    auto outside = [&chart](const std::array<double, 3>& y) {
        return !chart.inside({y[0], y[1]});
    };
    RawEnd out;
    if (T == 0.0) {
        out = {x, theta, true};
        return out;
    }

    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double dir = T > 0 ? 1.0 : -1.0;
    double t = 0.0;
    double h = dir * std::min(std::fabs(T) / 3.0, 0.25);
    const double hmin = std::fabs(T) * 1e-14 + 1e-300;

    std::array<double, 3> y{x.x, x.y, theta};
    std::array<double, 3> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    f(y.data(), k1.data());

    for (int iter = 0; iter < 100000; ++iter) {
        if (dir * (t + h - T) > 0.0) h = T - t;
        for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(ytmp.data(), k2.data());
        for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(ytmp.data(), k3.data());
        for (int i = 0; i < 3; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(ytmp.data(), k4.data());
        for (int i = 0; i < 3; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(ytmp.data(), k5.data());
        for (int i = 0; i < 3; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(ytmp.data(), k6.data());
        for (int i = 0; i < 3; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(ynew.data(), k7.data());

        double err = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = tol + tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / 3);

        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;
            if (outside(y)) return out;  // ok = false
            if (dir * (t - T) >= 0.0) {
                out = {{y[0], y[1]}, y[2], true};
                return out;
            }
        }
        const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
        if (std::fabs(h) < hmin) return out;
    }
    return out;
}

// Like integrate_raw but emits the state at several increasing arclength
// checkpoints (the last checkpoint is the integration end), interpolating
// inside accepted steps with cubic Hermite.  Returns false on domain exit.
inline bool integrate_raw_multi(const ConformalChart& chart, const SprayField& spray, Vec2 x,
                                double theta, const double* targets, size_t n_targets,
                                double tol, Vec2* out) {
    if (n_targets == 0) return true;
    const double T = targets[n_targets - 1];
    if (T == 0.0) {
        for (size_t i = 0; i < n_targets; ++i) out[i] = x;
        return true;
    }
    SprayRhs rhs{&chart, &spray};
    std::array<double, 3> y{x.x, x.y, theta};
    std::array<double, 3> f0;
    rhs(y.data(), f0.data());

    OdeStep<3> step;  // reused scratch for the Hermite checkpoints
    size_t next = 0;
    double t = 0.0;
    const double dir = T > 0 ? 1.0 : -1.0;
    double h = dir * std::min(std::fabs(T) / 3.0, 0.25);
    const double hmin = std::fabs(T) * 1e-14 + 1e-300;

    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::array<double, 3> k1 = f0, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    auto f = [&rhs](const double* s, double* d) { rhs(s, d); };

    for (int iter = 0; iter < 100000; ++iter) {
        if (dir * (t + h - T) > 0.0) h = T - t;
        for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(ytmp.data(), k2.data());
        for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(ytmp.data(), k3.data());
        for (int i = 0; i < 3; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(ytmp.data(), k4.data());
        for (int i = 0; i < 3; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(ytmp.data(), k5.data());
        for (int i = 0; i < 3; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(ytmp.data(), k6.data());
        for (int i = 0; i < 3; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(ynew.data(), k7.data());

        double err = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = tol + tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / 3);

        if (err <= 1.0) {
            step.t0 = t;
            step.t1 = t + h;
            step.y0 = y;
            step.y1 = ynew;
            step.f0 = k1;
            step.f1 = k7;
            t += h;
            y = ynew;
            k1 = k7;
            if (!chart.inside({y[0], y[1]})) return false;
            while (next < n_targets && dir * (targets[next] - t) <= 1e-15) {
                const auto s = step.interpolate(std::min(targets[next], t));
                out[next] = {s[0], s[1]};
                ++next;
            }
            if (next >= n_targets || dir * (t - T) >= 0.0) {
                for (; next < n_targets; ++next) out[next] = {y[0], y[1]};
                return true;
            }
        }
        const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
        if (std::fabs(h) < hmin) return false;
    }
    return false;
}

// Damped 2-D Newton iteration on (theta, length).  The length partial is
// the terminal chart velocity (a unit-speed geodesic advances along its
// own direction); the angle partial is a finite-difference variation.
inline ShootResult newton_shoot(const ConformalChart& chart, const SprayField& spray, Vec2 x,
                                Vec2 y, double theta, double len, int budget, double target,
                                double tol) {
    ShootResult out;
    out.theta = theta;
    out.length = len;
    const double dtheta = 1e-6;

    RawEnd cur = integrate_raw(chart, spray, x, theta, len, tol);
    if (!cur.ok) return out;
    double res = chart_dist(cur.p, y);

    for (int it = 0; it < budget; ++it) {
        out.iterations = it + 1;
        if (res < target) {
            out.converged = true;
            out.theta = theta;
            out.length = len;
            out.residual = res;
            return out;
        }

        const double em = chart.inv_conf(cur.p);
        const Vec2 d_len{em * std::cos(cur.theta_end), em * std::sin(cur.theta_end)};
        const RawEnd ep = integrate_raw(chart, spray, x, theta + dtheta, len, tol);
        if (!ep.ok) return out;
        const Vec2 d_theta = (ep.p - cur.p) / dtheta;

        const Vec2 r = cur.p - y;
        const double det = d_theta.x * d_len.y - d_theta.y * d_len.x;
        if (std::fabs(det) < 1e-300) return out;
        double step_theta = (-r.x * d_len.y + r.y * d_len.x) / det;
        double step_len = (-d_theta.x * r.y + d_theta.y * r.x) / det;

        // keep steps sane; wild jumps mean the Jacobian was evaluated far
        // from the solution
        const double max_dl = std::max(0.5 * std::fabs(len) + 0.1, 0.2);
        step_theta = std::clamp(step_theta, -1.0, 1.0);
        step_len = std::clamp(step_len, -max_dl, max_dl);

        double scale = 1.0;
        for (int damp = 0; damp < 5; ++damp) {
            const double th_try = theta + scale * step_theta;
            double len_try = len + scale * step_len;
            if (len_try < 0.0) len_try = std::fabs(len_try) * 0.25;
            const RawEnd trial = integrate_raw(chart, spray, x, th_try, len_try, tol);
            if (trial.ok) {
                const double rt = chart_dist(trial.p, y);
                if (rt < res || damp == 4) {
                    theta = th_try;
                    len = len_try;
                    res = rt;
                    cur = trial;
                    break;
                }
            }
            scale *= 0.5;
        }
    }
    if (res < target) {
        out.converged = true;
        out.residual = res;
        out.theta = theta;
        out.length = len;
    }
    return out;
}

}  // namespace detail

// Inverse exponential by Newton shooting.  Returns the tangent vector v
// at x with exp(x, v) = y (chart distance below 1e-9), or nullopt when
// the iteration does not converge within the budget -- which signals
// non-simplicity or a domain exit rather than being guessed around.
//
// `hint`, when given, seeds the iteration (used by the dense pair loops);
// otherwise the euclidean chord does.  If the seeded iteration fails, a
// fan of 16 starting angles is tried and the solution of smallest
// |v|_g wins, which makes the result reproducible even on sprays that
// are not simple.
inline std::optional<TangentVec> log_map(const ConformalChart& chart, const SprayField& spray,
                                         Vec2 x, Vec2 y, int budget = 32,
                                         const ShootResult* hint = nullptr, double tol = 1e-10,
                                         ShootResult* found = nullptr) {
    chart.require_inside(x, "log_map");
    chart.require_inside(y, "log_map");
    const double target = 1e-9 * (1.0 - 1e-3);

    const Vec2 chord = y - x;
    const double chord_len = chord.norm() * chart.conf_factor(x);
    if (chord.norm() < 1e-14) {
        if (found) *found = {true, 0.0, 0.0, 0.0, 0};
        return TangentVec{x, {0.0, 0.0}};
    }

    auto to_tangent = [&](const ShootResult& s) {
        const double em = chart.inv_conf(x);
        return TangentVec{x, {s.length * em * std::cos(s.theta), s.length * em * std::sin(s.theta)}};
    };

    if (hint && hint->length > 0.0) {
        auto r = detail::newton_shoot(chart, spray, x, y, hint->theta, hint->length, budget,
                                      target, tol);
        if (r.converged) {
            if (found) *found = r;
            return to_tangent(r);
        }
    }

    const double theta0 = std::atan2(chord.y, chord.x);
    auto r = detail::newton_shoot(chart, spray, x, y, theta0, chord_len, budget, target, tol);
    if (r.converged) {
        if (found) *found = r;
        return to_tangent(r);
    }

    // multi-start fan; keep the shortest solution
    ShootResult best;
    best.length = 1e300;
    for (int a = 0; a < 16; ++a) {
        const double th = theta0 + 2 * M_PI * a / 16.0;
        auto ra = detail::newton_shoot(chart, spray, x, y, th, chord_len, budget, target, tol);
        if (ra.converged && ra.length < best.length) best = ra;
    }
    if (best.converged) {
        if (found) *found = best;
        return to_tangent(best);
    }
    return std::nullopt;
}

// cot_K: sqrt(K) cot(sqrt(K) x) for K > 0, 1/x for K = 0,
// sqrt(-K) coth(sqrt(-K) x) for K < 0.
inline double cot_k(double K, double x) {
    if (K > 0.0) {
        const double s = std::sqrt(K);
        const double sx = std::sin(s * x);
        if (std::fabs(sx) < 1e-9) throw std::domain_error("cot_k: pole of cot");
        return s * std::cos(s * x) / sx;
    }
    if (K == 0.0) {
        if (x == 0.0) throw std::domain_error("cot_k: pole at x = 0");
        return 1.0 / x;
    }
    const double s = std::sqrt(-K);
    const double sh = std::sinh(s * x);
    if (std::fabs(sh) < 1e-300) throw std::domain_error("cot_k: pole at x = 0");
    return s * std::cosh(s * x) / sh;
}

}  // namespace spraylab
