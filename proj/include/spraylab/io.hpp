// CSV and SVG emission for reports and clouds.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spraylab/geometry.hpp"
#include "spraylab/sets.hpp"

namespace spraylab {

// Numbers are printed with 12 significant digits so outputs diff cleanly.
inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path);
        for (size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }

    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i)
            out_ << fmt12(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }

  private:
    std::ofstream out_;
};

// Minimal SVG scene over chart coordinates (no metric-correct rendering:
// the chart is the computation space and the drawing mirrors it).
class SvgScene {
  public:
    SvgScene(BBox box, int width = 640) : box_(box), width_(width) {
        const double aspect = box.height() / box.width();
        height_ = std::max(64, static_cast<int>(width * aspect));
    }

    void add_polyline(const std::vector<Vec2>& pts, const std::string& color = "#1f77b4",
                      double stroke = 1.5) {
        std::string d;
        for (size_t i = 0; i < pts.size(); ++i) {
            d += (i == 0 ? "M" : "L");
            d += coord(pts[i]);
        }
        body_ += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                 fmt12(stroke) + "\"/>\n";
    }

    void add_points(const std::vector<Vec2>& pts, const std::string& color = "#d62728",
                    double radius = 1.2) {
        for (const auto& p : pts)
            body_ += "<circle cx=\"" + fmt12(px(p.x)) + "\" cy=\"" + fmt12(py(p.y)) + "\" r=\"" +
                     fmt12(radius) + "\" fill=\"" + color + "\"/>\n";
    }

    void add_region_outline(const Region& r, const std::string& color = "#2ca02c") {
        if (r.shape == Region::Shape::Disc) {
            body_ += "<circle cx=\"" + fmt12(px(r.center.x)) + "\" cy=\"" + fmt12(py(r.center.y)) +
                     "\" r=\"" + fmt12(r.radius * scale()) + "\" fill=\"none\" stroke=\"" + color +
                     "\"/>\n";
        } else {
            add_polyline(r.vertices, color, 1.0);
            if (!r.vertices.empty())
                add_polyline({r.vertices.back(), r.vertices.front()}, color, 1.0);
        }
    }

    // Heat cells colored on a diverging scale: red below zero, blue above.
    void add_heat(const std::vector<Vec2>& centers, const std::vector<double>& values,
                  double cell_size) {
        double lo = 0, hi = 0;
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double span = std::max(std::max(std::fabs(lo), std::fabs(hi)), 1e-300);
        const double s = cell_size * scale();
        for (size_t i = 0; i < centers.size(); ++i) {
            const double t = std::clamp(values[i] / span, -1.0, 1.0);
            const int r = t < 0 ? 255 : static_cast<int>(255 * (1 - t));
            const int g = static_cast<int>(255 * (1 - std::fabs(t)));
            const int b = t > 0 ? 255 : static_cast<int>(255 * (1 + t));
            char color[10];
            std::snprintf(color, sizeof color, "#%02x%02x%02x", r, g, b);
            body_ += "<rect x=\"" + fmt12(px(centers[i].x) - s / 2) + "\" y=\"" +
                     fmt12(py(centers[i].y) - s / 2) + "\" width=\"" + fmt12(s) + "\" height=\"" +
                     fmt12(s) + "\" fill=\"" + std::string(color) + "\"/>\n";
        }
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
            << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << body_ << "</svg>\n";
    }

  private:
    double scale() const { return width_ / box_.width(); }
    double px(double x) const { return (x - box_.lo.x) * scale(); }
    double py(double y) const { return height_ - (y - box_.lo.y) * scale(); }
    std::string coord(Vec2 p) const { return fmt12(px(p.x)) + " " + fmt12(py(p.y)); }

    BBox box_;
    int width_, height_;
    std::string body_;
};

}  // namespace spraylab
