// Jacobi fields along spray geodesics, the Jacobian scalar J(t), concavity
// checking, and the one-dimensional needle inequality.
//
// J(t) = omega(gamma'(t), S(t)) with omega = e^{-phi} omega_g.  The field S
// is produced geometrically: integrate the geodesics from initial data
// perturbed by +/- eps and take the central difference, which mirrors the
// variational definition of a Jacobi field with one integrator serving
// every spray.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "spraylab/geometry.hpp"
#include "spraylab/spray.hpp"

namespace spraylab {

// Initial variation: the +/- eps geodesics start at
// (start + eps*dpos, theta0 + eps*dtheta).
struct VariationSpec {
    Vec2 dpos{0.0, 0.0};
    double dtheta = 0.0;

    static VariationSpec position(Vec2 d) { return {d, 0.0}; }
    static VariationSpec angle() { return {{0.0, 0.0}, 1.0}; }
};

struct JacobiTrace {
    std::vector<double> t;
    std::vector<double> J;
    Vec2 start;
    double theta0 = 0.0;
    double eps = 0.0;

    double grid_step() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
    double max_abs() const {
        double m = 0.0;
        for (double v : J) m = std::max(m, std::fabs(v));
        return m;
    }
};

inline JacobiTrace jacobi_trace(const ConformalChart& chart, const SprayField& spray, Vec2 start,
                                double theta0, double T, const VariationSpec& offset,
                                double eps = 1e-4, int n_grid = 257, double tol = 1e-12) {
    chart.require_inside(start, "jacobi_trace");
    if (offset.dpos.norm() == 0.0 && offset.dtheta == 0.0)
        throw std::invalid_argument("jacobi_trace: zero variation");

    const Vec2 s_plus = start + offset.dpos * eps;
    const Vec2 s_minus = start - offset.dpos * eps;
    const double th_plus = theta0 + offset.dtheta * eps;
    const double th_minus = theta0 - offset.dtheta * eps;

    // capping the step at the output grid makes the three trajectories
    // take identical step sequences, so the dense-output interpolation
    // error cancels in the central difference instead of polluting J''
    const double max_step = std::fabs(T) / (n_grid - 1);
    const Trajectory base = integrate(chart, spray, start, theta0, T, tol, max_step);
    const Trajectory plus = integrate(chart, spray, s_plus, th_plus, T, tol, max_step);
    const Trajectory minus = integrate(chart, spray, s_minus, th_minus, T, tol, max_step);
    if (!base.ok() || !plus.ok() || !minus.ok())
        throw std::domain_error("jacobi_trace: a perturbed geodesic left the chart domain");

    JacobiTrace out;
    out.start = start;
    out.theta0 = theta0;
    out.eps = eps;
    out.t.resize(n_grid);
    out.J.resize(n_grid);

    for (int i = 0; i < n_grid; ++i) {
        const double t = T * i / (n_grid - 1);
        const auto b = base.state(t);
        const auto p = plus.state(t);
        const auto m = minus.state(t);
        const Vec2 S{(p.x - m.x) / (2 * eps), (p.y - m.y) / (2 * eps)};
        const Vec2 pos{b.x, b.y};
        const double em = chart.inv_conf(pos);
        const Vec2 vel{em * std::cos(b.theta), em * std::sin(b.theta)};
        const double dens = chart.area_density(pos);  // e^{2 psi - phi}
        out.t[i] = t;
        out.J[i] = dens * vel.cross(S);
        if (!std::isfinite(out.J[i])) throw std::runtime_error("jacobi_trace: non-finite J");
    }

    // Transversality: J must be positive as soon as the variation separates
    // from the base geodesic.  Pure angle offsets have J(0) = 0 and are
    // admitted when J turns positive immediately after.
    if (out.J[0] < -1e-12 * std::max(1.0, out.max_abs()) || out.J[1] <= 0.0)
        throw std::invalid_argument("jacobi_trace: variation is not transversal (J <= 0)");
    return out;
}

struct ConcavityReport {
    double max_second_difference = 0.0;  // max_i (J_{i+1} - 2 J_i + J_{i-1}) / h^2, signed
    bool concave = false;
    double tolerance = 0.0;
};

// Verdict is concave when every raw centered second difference stays below
// tol_raw * max(1, max|J|); the reported statistic is normalized by h^2.
inline ConcavityReport concavity_check(const JacobiTrace& trace, double tol_raw = 1e-6) {
    if (trace.J.size() < 3) throw std::invalid_argument("concavity_check: need >= 3 grid points");
    const double h = trace.grid_step();
    double worst_raw = -1e300;
    for (size_t i = 1; i + 1 < trace.J.size(); ++i)
        worst_raw = std::max(worst_raw, trace.J[i + 1] - 2 * trace.J[i] + trace.J[i - 1]);
    ConcavityReport rep;
    rep.max_second_difference = worst_raw / (h * h);
    rep.tolerance = tol_raw * std::max(1.0, trace.max_abs());
    rep.concave = worst_raw <= rep.tolerance;
    return rep;
}

// ---------------------------------------------------------------------------
// One-dimensional needle machinery.

struct Interval {
    double a = 0.0, b = 0.0;
    double length() const { return b - a; }
};

using IntervalSet = std::vector<Interval>;

inline IntervalSet normalize(IntervalSet set) {
    std::sort(set.begin(), set.end(), [](const Interval& u, const Interval& v) { return u.a < v.a; });
    IntervalSet out;
    for (const auto& iv : set) {
        if (iv.b <= iv.a) continue;
        if (!out.empty() && iv.a <= out.back().b + 1e-15)
            out.back().b = std::max(out.back().b, iv.b);
        else
            out.push_back(iv);
    }
    return out;
}

// { (1-l) a + l b : a in A, b in B, a <= b }, exactly, via interval
// arithmetic over the ordered pairs.
inline IntervalSet ordered_average(const IntervalSet& A, const IntervalSet& B, double lambda) {
    IntervalSet out;
    for (const auto& ia : A) {
        for (const auto& ib : B) {
            if (ia.a > ib.b) continue;  // no ordered pair at all
            const double lo = (1 - lambda) * ia.a + lambda * std::max(ia.a, ib.a);
            const double hi = (1 - lambda) * std::min(ia.b, ib.b) + lambda * ib.b;
            if (hi >= lo) out.push_back({lo, hi});
        }
    }
    return normalize(out);
}

// A sampled density on [a, b].  `kinks` lists interior points where the
// density is not smooth; the quadrature splits panels there so that tent
// densities integrate at full order.
struct NeedleDensity {
    std::function<double(double)> value;
    double a = 0.0, b = 1.0;
    std::vector<double> kinks;
};

// Composite Simpson with panel splits at the registered kinks.
inline double integrate_density(const NeedleDensity& d, double u, double v, int n_panels = 256) {
    u = std::max(u, d.a);
    v = std::min(v, d.b);
    if (v <= u) return 0.0;
    std::vector<double> cuts{u};
    for (double k : d.kinks)
        if (k > u + 1e-15 && k < v - 1e-15) cuts.push_back(k);
    cuts.push_back(v);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double lo = cuts[c], hi = cuts[c + 1];
        const int n = std::max(2, n_panels - n_panels % 2);
        const double h = (hi - lo) / n;
        double acc = d.value(lo) + d.value(hi);
        for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * d.value(lo + i * h);
        total += acc * h / 3.0;
    }
    return total;
}

inline double measure(const NeedleDensity& d, const IntervalSet& set, int n_panels = 256) {
    double acc = 0.0;
    for (const auto& iv : normalize(set)) acc += integrate_density(d, iv.a, iv.b, n_panels);
    return acc;
}

struct NeedleReport {
    double mass_a = 0.0, mass_b = 0.0, mass_avg = 0.0;
    double lhs = 0.0, rhs = 0.0, margin = 0.0;
    IntervalSet average;
};

// Both sides of the sqrt-concavity inequality on a needle:
//   m(M(A,B;l))^{1/2} >= (1-l) m(A)^{1/2} + l m(B)^{1/2}.
//
// The inequality is guaranteed for nonnegative concave densities when B
// stochastically dominates A along the needle (in particular when A lies
// entirely to the left of B, the way the needle decomposition feeds it);
// for overlapping inputs without that ordering the ordered average can be
// strictly smaller than the free average and the margin may come out
// negative.  The report states what was measured either way.
inline NeedleReport needle_bm_1d(const NeedleDensity& density, const IntervalSet& A,
                                 const IntervalSet& B, double lambda, int n_panels = 256) {
    const IntervalSet An = normalize(A);
    const IntervalSet Bn = normalize(B);
    if (An.empty() || Bn.empty())
        throw std::invalid_argument("needle_bm_1d: empty interval set");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("needle_bm_1d: lambda must lie in (0, 1)");

    NeedleReport rep;
    rep.average = ordered_average(An, Bn, lambda);
    rep.mass_a = measure(density, An, n_panels);
    rep.mass_b = measure(density, Bn, n_panels);
    rep.mass_avg = measure(density, rep.average, n_panels);
    rep.lhs = std::sqrt(std::max(0.0, rep.mass_avg));
    rep.rhs = (1 - lambda) * std::sqrt(std::max(0.0, rep.mass_a)) +
              lambda * std::sqrt(std::max(0.0, rep.mass_b));
    rep.margin = rep.lhs - rep.rhs;
    return rep;
}

}  // namespace spraylab
