// Regions, deterministic sampling, and area measurement under the
// weighted volume form.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "spraylab/geometry.hpp"

namespace spraylab {

// Disc (center + euclidean chart radius) or simple polygon, closed sets in
// chart coordinates.
struct Region {
    enum class Shape { Disc, Polygon };
    Shape shape = Shape::Disc;
    Vec2 center{};
    double radius = 0.0;
    std::vector<Vec2> vertices;

    static Region disc(Vec2 c, double r) {
        Region reg;
        reg.shape = Shape::Disc;
        reg.center = c;
        reg.radius = r;
        return reg;
    }
    static Region polygon(std::vector<Vec2> verts) {
        if (verts.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
        Region reg;
        reg.shape = Shape::Polygon;
        reg.vertices = std::move(verts);
        return reg;
    }
};

inline BBox region_bbox(const Region& r) {
    if (r.shape == Region::Shape::Disc)
        return {{r.center.x - r.radius, r.center.y - r.radius},
                {r.center.x + r.radius, r.center.y + r.radius}};
    BBox b{{1e300, 1e300}, {-1e300, -1e300}};
    for (const auto& v : r.vertices) {
        b.lo.x = std::min(b.lo.x, v.x);
        b.lo.y = std::min(b.lo.y, v.y);
        b.hi.x = std::max(b.hi.x, v.x);
        b.hi.y = std::max(b.hi.y, v.y);
    }
    return b;
}

namespace detail {

inline bool on_segment(Vec2 p, Vec2 a, Vec2 b, double tol) {
    const Vec2 ab = b - a, ap = p - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return chart_dist(p, a) <= tol;
    const double t = std::clamp(ap.dot(ab) / len2, 0.0, 1.0);
    return chart_dist(p, a + ab * t) <= tol;
}

}  // namespace detail

// Closed membership test (boundary points count as inside).
inline bool region_contains(const Region& r, Vec2 p) {
    if (r.shape == Region::Shape::Disc) return chart_dist(p, r.center) <= r.radius + 1e-12;

    const auto& v = r.vertices;
    const double tol = 1e-12 * (1.0 + region_bbox(r).diameter());
    for (size_t i = 0; i < v.size(); ++i)
        if (detail::on_segment(p, v[i], v[(i + 1) % v.size()], tol)) return true;

    bool in = false;  // even-odd ray cast
    for (size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double xc = v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
            if (p.x < xc) in = !in;
        }
    }
    return in;
}

// Shortest euclidean distance from p to the region boundary.
inline double region_boundary_dist(const Region& r, Vec2 p) {
    if (r.shape == Region::Shape::Disc) return std::fabs(chart_dist(p, r.center) - r.radius);
    double best = 1e300;
    const auto& v = r.vertices;
    for (size_t i = 0; i < v.size(); ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % v.size()];
        const Vec2 ab = b - a;
        const double t = ab.norm2() > 0 ? std::clamp((p - a).dot(ab) / ab.norm2(), 0.0, 1.0) : 0.0;
        best = std::min(best, chart_dist(p, a + ab * t));
    }
    return best;
}

struct PointCloud {
    enum class Provenance { SampledRegion, MinkowskiImage };
    std::vector<Vec2> points;
    Provenance provenance = Provenance::SampledRegion;
    size_t n_lattice = 0;   // leading lattice points (rest are boundary samples)
};

// Lattice of pitch `spacing` anchored at the bbox corner, intersected with
// the closed region, followed by boundary samples at the same spacing.
// Deterministic for fixed inputs.
inline PointCloud sample_region(const Region& region, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("sample_region: spacing must be positive");
    if (region.shape == Region::Shape::Disc && region.radius <= 0.0)
        throw std::invalid_argument("sample_region: degenerate disc");

    PointCloud cloud;
    const BBox box = region_bbox(region);
    const int nx = static_cast<int>(std::floor(box.width() / spacing + 1e-9)) + 1;
    const int ny = static_cast<int>(std::floor(box.height() / spacing + 1e-9)) + 1;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Vec2 p{box.lo.x + i * spacing, box.lo.y + j * spacing};
            if (region_contains(region, p)) cloud.points.push_back(p);
        }
    cloud.n_lattice = cloud.points.size();

    if (region.shape == Region::Shape::Disc) {
        const int n = std::max<int>(8, std::lround(2 * M_PI * region.radius / spacing));
        for (int i = 0; i < n; ++i) {
            const double a = 2 * M_PI * i / n;
            cloud.points.push_back(region.center +
                                   Vec2{region.radius * std::cos(a), region.radius * std::sin(a)});
        }
    } else {
        const auto& v = region.vertices;
        for (size_t i = 0; i < v.size(); ++i) {
            const Vec2 a = v[i], b = v[(i + 1) % v.size()];
            const double len = chart_dist(a, b);
            const int n = std::max<int>(1, std::lround(len / spacing));
            for (int s = 0; s < n; ++s) cloud.points.push_back(a + (b - a) * (double(s) / n));
        }
    }

    if (cloud.points.empty()) throw std::invalid_argument("sample_region: region finer than spacing");
    return cloud;
}

namespace detail {

// Cell grids are phase-shifted by an irrational fraction of a cell so that
// lattice-aligned input geometry (unit squares, integer-spaced samples)
// does not sit exactly on cell boundaries, where floating-point noise
// would flip rim cells.
constexpr double kCellPhaseX = 0.31830988618367;  // 1/pi
constexpr double kCellPhaseY = 0.36787944117144;  // 1/e

inline int64_t cell_index(double v, double cell, double phase) {
    return static_cast<int64_t>(std::floor(v / cell - phase));
}

struct CellKey {
    int64_t ix, iy;
    bool operator==(const CellKey& o) const { return ix == o.ix && iy == o.iy; }
};

struct CellHash {
    size_t operator()(const CellKey& k) const {
        return std::hash<int64_t>()(k.ix * 1000003 + k.iy);
    }
};

}  // namespace detail

// Cell-cover area of a point cloud: a cell counts if it contains at least
// one point, weighted by the area density at its center (or at a point it
// contains, when the center leaves the chart domain).
inline double measure_area(const ConformalChart& chart, const PointCloud& cloud, double cell) {
    if (!(cell > 0.0)) throw std::invalid_argument("measure_area: cell must be positive");
    if (cloud.points.empty()) return 0.0;

    std::unordered_map<detail::CellKey, Vec2, detail::CellHash> marked;
    marked.reserve(cloud.points.size());
    for (const auto& p : cloud.points) {
        const detail::CellKey key{detail::cell_index(p.x, cell, detail::kCellPhaseX),
                                  detail::cell_index(p.y, cell, detail::kCellPhaseY)};
        marked.emplace(key, p);
    }

    std::vector<std::pair<detail::CellKey, Vec2>> cells(marked.begin(), marked.end());
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
        return a.first.ix != b.first.ix ? a.first.ix < b.first.ix : a.first.iy < b.first.iy;
    });

    double area = 0.0;
    for (const auto& [key, witness] : cells) {
        const Vec2 center{(key.ix + 0.5 + detail::kCellPhaseX) * cell,
                          (key.iy + 0.5 + detail::kCellPhaseY) * cell};
        const Vec2 eval = chart.inside(center) ? center : witness;
        area += chart.area_density(eval) * cell * cell;
    }
    return area;
}

// Center-rule rasterization of a region.
inline double measure_area(const ConformalChart& chart, const Region& region, double cell) {
    if (!(cell > 0.0)) throw std::invalid_argument("measure_area: cell must be positive");
    const BBox box = region_bbox(region);
    const int64_t i0 = detail::cell_index(box.lo.x, cell, detail::kCellPhaseX) - 1;
    const int64_t i1 = detail::cell_index(box.hi.x, cell, detail::kCellPhaseX) + 1;
    const int64_t j0 = detail::cell_index(box.lo.y, cell, detail::kCellPhaseY) - 1;
    const int64_t j1 = detail::cell_index(box.hi.y, cell, detail::kCellPhaseY) + 1;

    double area = 0.0;
    for (int64_t j = j0; j <= j1; ++j) {
        for (int64_t i = i0; i <= i1; ++i) {
            const Vec2 center{(i + 0.5 + detail::kCellPhaseX) * cell,
                              (j + 0.5 + detail::kCellPhaseY) * cell};
            if (!region_contains(region, center) || !chart.inside(center)) continue;
            area += chart.area_density(center) * cell * cell;
        }
    }
    return area;
}

}  // namespace spraylab
