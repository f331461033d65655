// Generalized Minkowski averages, Brunn-Minkowski verification, and the
// thin-strip violation finder.
//
// The average of two sampled sets is the image of every sample pair
// (a, b) under v = log(a, b), p = exp(a, lambda v).  The pair loop is the
// hot path: shooting solutions are chained as warm starts along the
// lattice, and the verification pipeline streams image points straight
// into rasterization cells instead of materializing the product.
//
// Areas in a report are all measured the same way (cell cover of point
// clouds at one cell size), so the cover dilation largely cancels in the
// margin; the A = B identity case calibrates what remains.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "spraylab/curvature.hpp"
#include "spraylab/geometry.hpp"
#include "spraylab/jacobi.hpp"
#include "spraylab/parallel.hpp"
#include "spraylab/sets.hpp"
#include "spraylab/spray.hpp"

namespace spraylab {

struct BmOptions {
    double spacing = 0.0;       // region sampling pitch; 0 = cell / 2
    double cell = 0.0;          // rasterization cell; 0 = derive from inputs
    double tol_rel = 0.02;      // verdict: margin >= -tol_rel * rhs
    double N = 2.0;             // exponent 1/N
    int shoot_budget = 32;
    double ode_tol = 1e-8;
    int n_threads = 0;          // 0 = library default
    double max_failure_rate = 0.01;
};

struct BmReport {
    double lambda = 0.0;
    double N = 2.0;
    double area_a = 0.0, area_b = 0.0, area_avg = 0.0;
    double lhs = 0.0, rhs = 0.0, margin = 0.0;
    double spacing = 0.0, cell = 0.0, tol_rel = 0.02;
    size_t n_pairs = 0, n_failures = 0;
    bool holds = false;
};

namespace detail {

using CellSet = std::unordered_map<CellKey, Vec2, CellHash>;

inline void mark_cell(CellSet& cells, Vec2 p, double cell) {
    cells.emplace(CellKey{cell_index(p.x, cell, kCellPhaseX),
                          cell_index(p.y, cell, kCellPhaseY)},
                  p);
}

inline double cover_area(const ConformalChart& chart, const CellSet& cells, double cell) {
    std::vector<std::pair<CellKey, Vec2>> sorted(cells.begin(), cells.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.first.ix != b.first.ix ? a.first.ix < b.first.ix : a.first.iy < b.first.iy;
    });
    double area = 0.0;
    for (const auto& [key, witness] : sorted) {
        const Vec2 center{(key.ix + 0.5 + kCellPhaseX) * cell,
                          (key.iy + 0.5 + kCellPhaseY) * cell};
        area += chart.area_density(chart.inside(center) ? center : witness) * cell * cell;
    }
    return area;
}

inline CellSet cover_of(const std::vector<Vec2>& pts, double cell, size_t count = 0) {
    CellSet set;
    set.reserve(pts.size());
    const size_t n = count > 0 ? std::min(count, pts.size()) : pts.size();
    for (size_t i = 0; i < n; ++i) mark_cell(set, pts[i], cell);
    return set;
}

// Visits gamma_{ab}(lambda_l) for every sample pair (i, j) and every l.
// visit(worker, l, i, j, point) must be thread-safe across workers (each
// worker owns a disjoint range of i).  Returns the failure count.
template <typename Visit>
size_t for_each_pair_image(const ConformalChart& chart, const SprayField& spray,
                           const std::vector<Vec2>& as, const std::vector<Vec2>& bs,
                           const std::vector<double>& lambdas, const BmOptions& opt,
                           const Visit& visit, bool include_self_pairs = true) {
    const size_t nA = as.size(), nB = bs.size();
    const int workers = std::max(1, opt.n_threads > 0 ? opt.n_threads : default_thread_count());
    std::vector<size_t> fail(workers + 1, 0);

    parallel_chunks(
        nA,
        [&](size_t i0, size_t i1, int w) {
            ShootResult row_hint{};
            bool have_row_hint = false;
            for (size_t i = i0; i < i1; ++i) {
                const Vec2 a = as[i];
                ShootResult prev{}, prev2{};
                int chain = have_row_hint ? 1 : 0;
                prev = row_hint;
                bool row_seeded = false;
                for (size_t j = 0; j < nB; ++j) {
                    // linear extrapolation along the sample row cuts a
                    // Newton iteration off most pairs
                    ShootResult hint = prev;
                    if (chain >= 2) {
                        hint.theta = 2 * prev.theta - prev2.theta;
                        hint.length = std::max(2 * prev.length - prev2.length, 0.0);
                    }
                    ShootResult shot;
                    const auto v = log_map(chart, spray, a, bs[j], opt.shoot_budget,
                                           chain >= 1 ? &hint : nullptr, opt.ode_tol, &shot);
                    if (!v) {
                        ++fail[w];
                        chain = 0;
                        continue;
                    }
                    prev2 = prev;
                    prev = shot;
                    chain = std::min(chain + 1, 2);
                    if (!row_seeded) {
                        row_hint = shot;
                        have_row_hint = true;
                        row_seeded = true;
                    }
                    if (shot.length == 0.0) {
                        // coincident samples map to themselves; the cover
                        // stream skips them so the measurement keeps the
                        // lands-strictly-inside semantics of the lattices
                        if (include_self_pairs)
                            for (size_t l = 0; l < lambdas.size(); ++l) visit(w, l, i, j, a);
                        continue;
                    }
                    // one integration pass emits every lambda point;
                    // lambdas are increasing by construction below
                    double targets[8];
                    Vec2 images[8];
                    const size_t nl = lambdas.size();
                    for (size_t l = 0; l < nl; ++l) targets[l] = lambdas[l] * shot.length;
                    if (detail::integrate_raw_multi(chart, spray, a, shot.theta, targets, nl,
                                                    opt.ode_tol, images)) {
                        for (size_t l = 0; l < nl; ++l) visit(w, l, i, j, images[l]);
                    } else {
                        ++fail[w];
                    }
                }
            }
        },
        workers);

    size_t failures = 0;
    for (size_t f : fail) failures += f;
    const size_t pairs = nA * nB;
    if (pairs > 0 && failures > opt.max_failure_rate * static_cast<double>(pairs))
        throw std::runtime_error(
            "minkowski_average: shooting failed on " + std::to_string(failures) + " of " +
            std::to_string(pairs) +
            " pairs; the spray does not look simple on this configuration");
    return failures;
}

}  // namespace detail

// The set of lambda-points of spray geodesics from A-samples to B-samples.
// Shooting failures are excluded and counted; a failure rate above
// max_failure_rate aborts with a non-simplicity diagnostic.
inline PointCloud minkowski_average(const ConformalChart& chart, const SprayField& spray,
                                    const PointCloud& A, const PointCloud& B, double lambda,
                                    const BmOptions& opt = {}, size_t* failures_out = nullptr) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("minkowski_average: lambda must lie in (0, 1)");
    const size_t nA = A.points.size(), nB = B.points.size();
    std::vector<std::optional<Vec2>> slots(nA * nB);
    const size_t failures = detail::for_each_pair_image(
        chart, spray, A.points, B.points, {lambda}, opt,
        [&](int, size_t, size_t i, size_t j, Vec2 p) { slots[i * nB + j] = p; });
    if (failures_out) *failures_out = failures;

    PointCloud out;
    out.provenance = PointCloud::Provenance::MinkowskiImage;
    out.points.reserve(slots.size() - failures);
    for (const auto& s : slots)
        if (s) out.points.push_back(*s);
    return out;
}

// Region convenience overload: samples both regions at `spacing`.
inline PointCloud minkowski_average(const ConformalChart& chart, const SprayField& spray,
                                    const Region& A, const Region& B, double lambda,
                                    double spacing, const BmOptions& opt = {}) {
    return minkowski_average(chart, spray, sample_region(A, spacing), sample_region(B, spacing),
                             lambda, opt);
}

// Brunn-Minkowski verification for a batch of lambdas sharing one pass of
// pair shooting.  All three areas are cell-cover measurements.
inline std::vector<BmReport> verify_bm_batch(const ConformalChart& chart, const SprayField& spray,
                                             const Region& A, const Region& B,
                                             std::vector<double> lambdas, BmOptions opt = {}) {
    if (opt.cell <= 0.0) {
        const double scale =
            std::max(region_bbox(A).diameter(), region_bbox(B).diameter());
        opt.cell = scale / 24.0;
    }
    if (opt.spacing <= 0.0) opt.spacing = opt.cell / 2.0;
    if (opt.spacing > opt.cell / 2.0 + 1e-15)
        throw std::invalid_argument("verify_bm: sampling spacing must be <= cell / 2");
    if (lambdas.empty() || lambdas.size() > 8)
        throw std::invalid_argument("verify_bm: 1 to 8 lambdas per batch");
    for (double l : lambdas)
        if (!(l > 0.0 && l < 1.0))
            throw std::invalid_argument("verify_bm: lambda must lie in (0, 1)");
    std::sort(lambdas.begin(), lambdas.end());  // reports come back sorted

    const PointCloud sa = sample_region(A, opt.spacing);
    const PointCloud sb = sample_region(B, opt.spacing);

    const int workers = std::max(1, opt.n_threads > 0 ? opt.n_threads : default_thread_count());
    std::vector<std::vector<detail::CellSet>> marks(
        workers + 1, std::vector<detail::CellSet>(lambdas.size()));
    const size_t failures = detail::for_each_pair_image(
        chart, spray, sa.points, sb.points, lambdas, opt,
        [&](int w, size_t l, size_t, size_t, Vec2 p) {
            detail::mark_cell(marks[w][l], p, opt.cell);
        });


    const double area_a = detail::cover_area(chart, detail::cover_of(sa.points, opt.cell), opt.cell);
    const double area_b = detail::cover_area(chart, detail::cover_of(sb.points, opt.cell), opt.cell);

    std::vector<BmReport> out;
    for (size_t l = 0; l < lambdas.size(); ++l) {
        detail::CellSet merged;
        for (int w = 0; w <= workers; ++w)
            for (const auto& kv : marks[w][l]) merged.emplace(kv.first, kv.second);
        BmReport rep;
        rep.lambda = lambdas[l];
        rep.N = opt.N;
        rep.area_a = area_a;
        rep.area_b = area_b;
        rep.area_avg = detail::cover_area(chart, merged, opt.cell);
        rep.lhs = std::pow(rep.area_avg, 1.0 / opt.N);
        rep.rhs = (1 - lambdas[l]) * std::pow(area_a, 1.0 / opt.N) +
                  lambdas[l] * std::pow(area_b, 1.0 / opt.N);
        rep.margin = rep.lhs - rep.rhs;
        rep.spacing = opt.spacing;
        rep.cell = opt.cell;
        rep.tol_rel = opt.tol_rel;
        rep.n_pairs = sa.points.size() * sb.points.size();
        rep.n_failures = failures;
        rep.holds = rep.margin >= -opt.tol_rel * rep.rhs;
        out.push_back(rep);
    }
    return out;
}

inline BmReport verify_bm(const ConformalChart& chart, const SprayField& spray, const Region& A,
                          const Region& B, double lambda, const BmOptions& opt = {}) {
    return verify_bm_batch(chart, spray, A, B, {lambda}, opt).front();
}

// ---------------------------------------------------------------------------
// Violation finder: thin transversal strips around a point where J fails
// concavity, following the variation map of the converse construction.

enum class ViolationStatus { Found, None, Inconclusive };

struct ViolationResult {
    ViolationStatus status = ViolationStatus::None;
    Region A, B;
    double lambda = 0.5;
    BmReport report;
    double t_star = 0.0;          // arclength of the convexity point
    double predicted_margin = 0.0;
    int levels_tried = 0;
};

struct GeodesicSeed {
    Vec2 start;
    double theta0 = 0.0;
    double T = 2.0;
};

namespace detail {

// F(s, t): geodesic from start offset s chart units along the initial
// normal, evaluated at arclength t.
struct VariationMap {
    const ConformalChart* chart;
    const SprayField* spray;
    Vec2 start;
    double theta0;
    Vec2 normal;
    double tol;

    Trajectory curve(double s, double T) const {
        return integrate(*chart, *spray, start + normal * s, theta0, T, tol);
    }
};

inline Region strip_polygon(const VariationMap& F, double delta, double t0, double t1) {
    const int n = 9;
    const Trajectory lo = F.curve(0.0, t1 * 1.02 + 1e-6);
    const Trajectory hi = F.curve(delta, t1 * 1.02 + 1e-6);
    if (!lo.ok() || !hi.ok()) throw std::domain_error("find_violation: strip left the domain");
    std::vector<Vec2> verts;
    for (int i = 0; i < n; ++i) verts.push_back(lo.point(t0 + (t1 - t0) * i / (n - 1)));
    for (int i = n - 1; i >= 0; --i) verts.push_back(hi.point(t0 + (t1 - t0) * i / (n - 1)));
    return Region::polygon(verts);
}

}  // namespace detail

// Scans J along the seed geodesic for convexity, then builds strip pairs
// A = F([0,d] x [x0, x0+l0]), B = F([0,d] x [x1, x1+l1]) with lengths
// proportional to J and shrinks d geometrically until the measured margin
// drops below -5% of the right-hand side.
inline ViolationResult find_violation(const ConformalChart& chart, const SprayField& spray,
                                      const GeodesicSeed& seed, int budget = 12,
                                      const BmOptions& base_opt = {}) {
    ViolationResult res;
    const double margin_target = -0.05;

    // Jacobi trace from the position-normal variation.
    const Vec2 normal{-std::sin(seed.theta0), std::cos(seed.theta0)};
    JacobiTrace trace;
    detail::VariationMap F{&chart, &spray, seed.start, seed.theta0, normal, 1e-11};
    try {
        trace = jacobi_trace(chart, spray, seed.start, seed.theta0, seed.T,
                             VariationSpec::position(normal), 1e-4, 257, 1e-11);
    } catch (const std::invalid_argument&) {
        F.normal = -normal;
        trace = jacobi_trace(chart, spray, seed.start, seed.theta0, seed.T,
                             VariationSpec::position(-normal), 1e-4, 257, 1e-11);
    }

    // require an actual concavity failure along the seed
    const double h = trace.grid_step();
    double max_dd = -1e300;
    for (size_t i = 1; i + 1 < trace.J.size(); ++i)
        max_dd = std::max(max_dd, (trace.J[i + 1] - 2 * trace.J[i] + trace.J[i - 1]) / (h * h));
    if (max_dd <= 1e-4 * std::max(1.0, trace.max_abs())) {
        res.status = ViolationStatus::None;  // J concave along the seed
        return res;
    }

    auto J_at = [&](double t) {
        const double u = std::clamp((t - trace.t.front()) / h, 0.0,
                                    static_cast<double>(trace.J.size() - 1));
        const size_t i = std::min(trace.J.size() - 2, static_cast<size_t>(u));
        const double w = u - i;
        return (1 - w) * trace.J[i] + w * trace.J[i + 1];
    };

    // place the window (t*, delta) where the needle prediction
    // sqrt(J(t*) / mean(J(t* -+ delta))) - 1 is most negative
    const double t_lo = trace.t.front(), t_hi = trace.t.back();
    double t_star = 0.0, delta_t = 0.0, predicted = 0.0;
    for (size_t i = 8; i + 8 < trace.t.size(); ++i) {
        const double tc = trace.t[i];
        const double dmax = 0.9 * std::min(tc - t_lo, t_hi - tc);
        for (double cand = dmax; cand > 1e-3; cand *= 0.75) {
            const double J0 = J_at(tc - cand);
            const double J1 = J_at(tc + cand);
            const double Jm = J_at(tc);
            if (J0 <= 0 || J1 <= 0 || Jm <= 0) continue;
            const double pred = std::sqrt(Jm / (0.5 * (J0 + J1))) - 1.0;
            if (pred < predicted) {
                predicted = pred;
                t_star = tc;
                delta_t = cand;
            }
        }
    }
    if (predicted > 2.2 * margin_target) {
        res.status = ViolationStatus::Inconclusive;
        return res;
    }
    res.t_star = t_star;
    res.predicted_margin = predicted;

    const double x0c = t_star - delta_t;
    const double x1c = t_star + delta_t;
    const double lscale = 0.22 * delta_t / std::max(J_at(x0c), J_at(x1c));
    const double l0 = lscale * J_at(x0c);
    const double l1 = lscale * J_at(x1c);

    double delta = 0.08 * delta_t;
    for (int level = 0; level < budget; ++level, delta *= 0.5) {
        res.levels_tried = level + 1;
        Region A, B;
        try {
            A = detail::strip_polygon(F, delta, x0c, x0c + l0);
            B = detail::strip_polygon(F, delta, x1c, x1c + l1);
        } catch (const std::domain_error&) {
            continue;
        }
        BmOptions opt = base_opt;
        opt.cell = std::min(delta, std::min(l0, l1)) / 3.0;
        opt.spacing = opt.cell / 2.0;
        opt.tol_rel = 0.02;
        BmReport rep;
        try {
            rep = verify_bm(chart, spray, A, B, 0.5, opt);
        } catch (const std::runtime_error&) {
            continue;  // shooting failures at this strip scale
        }
        if (rep.rhs > 0 && rep.margin <= margin_target * rep.rhs) {
            res.status = ViolationStatus::Found;
            res.A = A;
            res.B = B;
            res.report = rep;
            return res;
        }
    }
    res.status = ViolationStatus::Inconclusive;
    return res;
}

}  // namespace spraylab
