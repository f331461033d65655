// Adaptive Dormand-Prince 5(4) integrator for small autonomous systems.
//
// Coefficients follow the original 1980 paper.  The last stage equals the
// first stage of the next step (FSAL), so an accepted step costs six
// derivative evaluations.  Dense output between accepted steps is cubic
// Hermite on (state, derivative) pairs, which is accurate enough relative
// to the 5th-order step error at the tolerances used here.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace spraylab {

template <size_t N>
struct OdeStep {
    double t0 = 0.0, t1 = 0.0;
    std::array<double, N> y0{}, y1{};
    std::array<double, N> f0{}, f1{};

    std::array<double, N> interpolate(double t) const {
        const double h = t1 - t0;
        const double u = (t - t0) / h;
        const double u2 = u * u, u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1;
        const double h10 = u3 - 2 * u2 + u;
        const double h01 = -2 * u3 + 3 * u2;
        const double h11 = u3 - u2;
        std::array<double, N> out{};
        for (size_t i = 0; i < N; ++i)
            out[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
        return out;
    }
};

enum class OdeStatus { Ok, Stopped, StepUnderflow };

template <size_t N>
struct OdeResult {
    std::vector<OdeStep<N>> steps;
    OdeStatus status = OdeStatus::Ok;
    double t_end = 0.0;
    int n_accepted = 0;
    int n_rejected = 0;

    std::array<double, N> at(double t) const {
        // Steps are monotone in t (increasing or decreasing).
        const bool fwd = steps.back().t1 >= steps.front().t0;
        size_t lo = 0, hi = steps.size();
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            const bool left = fwd ? (t < steps[mid].t0) : (t > steps[mid].t0);
            if (left) hi = mid; else lo = mid;
        }
        return steps[lo].interpolate(t);
    }
};

// Integrates dy/dt = f(y) from t=0 to t=T (T may be negative).  `stop`
// (optional) is checked on accepted states; returning true truncates the
// integration at the first offending step boundary, leaving the caller to
// refine the crossing with the dense output.
template <size_t N, typename F, typename Stop>
OdeResult<N> integrate_ode(F&& f, std::array<double, N> y, double T, double atol, double rtol,
                           Stop&& stop, int max_steps = 2000000, double max_step = 0.0) {
    OdeResult<N> res;
    if (T == 0.0) {
        OdeStep<N> s;
        s.y0 = s.y1 = y;
        f(y.data(), s.f0.data());
        s.f1 = s.f0;
        res.steps.push_back(s);
        return res;
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
    double h = dir * std::min(std::fabs(T) / 10.0, 0.1);
    if (max_step > 0.0) h = dir * std::min(std::fabs(h), max_step);
    const double hmin = std::fabs(T) * 1e-14 + 1e-300;

    std::array<double, N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, ynew{};
    f(y.data(), k1.data());

    for (int iter = 0; iter < max_steps; ++iter) {
        if (dir * (t + h - T) > 0.0) h = T - t;

        for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(ytmp.data(), k2.data());
        for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(ytmp.data(), k3.data());
        for (size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(ytmp.data(), k4.data());
        for (size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(ytmp.data(), k5.data());
        for (size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(ytmp.data(), k6.data());
        for (size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(ynew.data(), k7.data());

        double err = 0.0;
        for (size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = atol + rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            OdeStep<N> s;
            s.t0 = t;
            s.t1 = t + h;
            s.y0 = y;
            s.y1 = ynew;
            s.f0 = k1;
            s.f1 = k7;
            res.steps.push_back(s);
            ++res.n_accepted;
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            if (stop(y)) {
                res.status = OdeStatus::Stopped;
                res.t_end = t;
                return res;
            }
            if (dir * (t - T) >= 0.0) {
                res.t_end = t;
                return res;
            }
        } else {
            ++res.n_rejected;
        }

        const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
        if (max_step > 0.0 && std::fabs(h) > max_step) h = dir * max_step;
        if (std::fabs(h) < hmin) {
            res.status = OdeStatus::StepUnderflow;
            res.t_end = t;
            return res;
        }
    }
    res.status = OdeStatus::StepUnderflow;
    res.t_end = t;
    return res;
}

template <size_t N, typename F>
OdeResult<N> integrate_ode(F&& f, std::array<double, N> y, double T, double atol, double rtol) {
    return integrate_ode<N>(std::forward<F>(f), y, T, atol, rtol,
                            [](const std::array<double, N>&) { return false; });
}

}  // namespace spraylab
