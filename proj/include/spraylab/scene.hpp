// Scene configuration: a single JSON document naming (or defining) the
// chart, the spray, the weight, regions, and numeric parameters.  All
// randomness downstream is derived from the explicit seed.
#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spraylab/catalog.hpp"
#include "spraylab/expr.hpp"
#include "spraylab/geometry.hpp"
#include "spraylab/sets.hpp"
#include "spraylab/spray.hpp"

namespace spraylab {

struct SceneParams {
    double spacing = 0.0;  // 0 = derived defaults downstream
    double cell = 0.0;
    double lambda = 0.5;
    double N = 2.0;
    double tol = 1e-10;
    Vec2 start{0, 0};
    double theta0 = 0.0;
    double T = 0.0;  // 0 = take the entry's reference geodesic
    double eps = 1e-4;
    Vec2 offset_pos{0, 1};
    double offset_theta = 0.0;
    int budget = 12;
    int n_squares = 64;
    int n_pairs = 20;
    int n_perturb = 50;
    std::string density = "1";
    double support_a = 0.0, support_b = 1.0;
    std::vector<std::pair<double, double>> A1{{0.0, 0.1}}, B1{{0.8, 1.0}};
};

struct SceneConfig {
    uint64_t seed = 0;
    std::string entry_name;  // empty when chart/spray given explicitly
    ConformalChart chart;
    SprayField spray;
    std::optional<CatalogEntry> entry;
    std::map<std::string, Region> regions;
    std::optional<std::array<Vec2, 3>> bases;
    SceneParams params;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline ScalarField field_from_expression(const std::string& text, double fd_step) {
    const Expression e = Expression::parse(text);
    ScalarField f;
    f.value = [e](Vec2 p) { return e.eval(p.x, p.y); };
    f.fd_step = fd_step;
    return f;
}

inline Region region_from_json(const nlohmann::json& j) {
    if (j.contains("disc")) {
        const auto& d = j.at("disc");
        if (!d.is_array() || d.size() != 3)
            throw ConfigError("region disc must be [cx, cy, r]");
        const double r = d[2].get<double>();
        if (!(r > 0)) throw ConfigError("region disc needs a positive radius");
        return Region::disc({d[0].get<double>(), d[1].get<double>()}, r);
    }
    if (j.contains("polygon")) {
        std::vector<Vec2> verts;
        for (const auto& v : j.at("polygon"))
            verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        return Region::polygon(verts);
    }
    throw ConfigError("region must specify 'disc' or 'polygon'");
}

inline ConformalChart chart_from_json(const nlohmann::json& j) {
    if (j.contains("builtin")) return builtin_chart(j.at("builtin").get<std::string>());
    if (!j.contains("psi")) throw ConfigError("chart needs 'builtin' or a 'psi' expression");

    BBox box{{-2, -2}, {2, 2}};
    if (j.contains("bbox")) {
        const auto& b = j.at("bbox");
        if (!b.is_array() || b.size() != 4) throw ConfigError("chart bbox must be [x0,y0,x1,y1]");
        box = {{b[0].get<double>(), b[1].get<double>()}, {b[2].get<double>(), b[3].get<double>()}};
        if (!(box.lo.x < box.hi.x && box.lo.y < box.hi.y))
            throw ConfigError("chart bbox is empty");
    }
    const double fd_step = 1e-5 * box.diameter();

    ConformalChart c;
    c.name = "custom";
    c.bbox = box;
    c.psi = field_from_expression(j.at("psi").get<std::string>(), fd_step);
    if (j.contains("inside")) {
        const Expression e = Expression::parse(j.at("inside").get<std::string>());
        c.inside_fn = [e, box](Vec2 p) { return box.contains(p) && e.eval(p.x, p.y) > 0.0; };
    } else {
        c.inside_fn = [box](Vec2 p) { return box.contains(p); };
    }
    if (j.contains("phi"))
        c.weight_phi = field_from_expression(j.at("phi").get<std::string>(), fd_step);

    // finiteness of psi on a sampling grid of the domain
    for (int i = 0; i < 24; ++i)
        for (int k = 0; k < 24; ++k) {
            const Vec2 p{box.lo.x + box.width() * (i + 0.5) / 24,
                         box.lo.y + box.height() * (k + 0.5) / 24};
            if (!c.inside(p)) continue;
            if (!std::isfinite(c.psi.value(p)))
                throw ConfigError("psi is not finite inside the declared domain");
        }
    return c;
}

inline SprayField spray_from_json(const nlohmann::json& j, const ConformalChart& chart) {
    SprayField s;
    if (j.contains("kappa")) {
        const Expression e = Expression::parse(j.at("kappa").get<std::string>());
        s = make_magnetic_spray([e](Vec2 p) { return e.eval(p.x, p.y); });
    } else if (j.contains("constant")) {
        s = make_constant_spray(j.at("constant").get<double>());
    } else if (j.contains("k")) {
        const Expression e = Expression::parse(j.at("k").get<std::string>());
        s.k = [e](double x, double y, double theta) { return e.eval(x, y, theta); };
    } else {
        throw ConfigError("spray needs 'kappa', 'constant', or 'k'");
    }
    if (j.value("reversed", false)) s = reverse(s);

    if (s.is_magnetic()) {
        // direction independence of the realized law, sampled on the chart
        std::mt19937_64 rng(12345);
        auto uni = [&rng](double a, double b) {
            return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        };
        if (magnetic_defect_sample(chart, s, uni) > 1e-12)
            throw ConfigError("spray tagged magnetic varies with direction");
    }
    return s;
}

inline std::vector<std::pair<double, double>> intervals_from_json(const nlohmann::json& j) {
    std::vector<std::pair<double, double>> out;
    for (const auto& iv : j) {
        if (!iv.is_array() || iv.size() != 2) throw ConfigError("interval must be [a, b]");
        out.push_back({iv[0].get<double>(), iv[1].get<double>()});
    }
    return out;
}

}  // namespace detail

inline SceneConfig load_scene(const nlohmann::json& j) {
    SceneConfig cfg;
    try {
        cfg.seed = j.value("seed", uint64_t{0});

        if (j.contains("entry")) {
            cfg.entry_name = j.at("entry").get<std::string>();
            CatalogParams params;
            if (j.contains("entry_params")) {
                const auto& p = j.at("entry_params");
                params.r = p.value("r", params.r);
                params.R = p.value("R", params.R);
                params.chart = p.value("chart", params.chart);
                params.f = p.value("f", params.f);
            }
            // shorthand circular_arcs(0.5,2) also accepted
            auto name = cfg.entry_name;
            const auto open = name.find('(');
            if (open != std::string::npos && name.back() == ')') {
                const std::string args = name.substr(open + 1, name.size() - open - 2);
                name = name.substr(0, open);
                const auto comma = args.find(',');
                if (name == "circular_arcs" && comma != std::string::npos) {
                    params.r = std::stod(args.substr(0, comma));
                    params.R = std::stod(args.substr(comma + 1));
                } else if (name == "cotK") {
                    params.f = args;
                }
                cfg.entry_name = name;
            }
            cfg.entry = builtin(cfg.entry_name, params);
            cfg.chart = cfg.entry->chart;
            cfg.spray = cfg.entry->spray;
            cfg.regions.emplace("working", cfg.entry->working);
        } else {
            if (!j.contains("chart")) throw ConfigError("config needs 'entry' or 'chart'");
            cfg.chart = detail::chart_from_json(j.at("chart"));
            if (!j.contains("spray")) throw ConfigError("config needs a 'spray'");
            cfg.spray = detail::spray_from_json(j.at("spray"), cfg.chart);
        }

        if (j.contains("phi")) {
            cfg.chart.weight_phi = detail::field_from_expression(
                j.at("phi").get<std::string>(), 1e-5 * cfg.chart.bbox.diameter());
        }

        if (j.contains("regions"))
            for (const auto& [key, val] : j.at("regions").items())
                cfg.regions.insert_or_assign(key, detail::region_from_json(val));

        if (j.contains("bases")) {
            const auto& b = j.at("bases");
            if (!b.is_array() || b.size() != 3) throw ConfigError("bases must list 3 points");
            cfg.bases = std::array<Vec2, 3>{};
            for (int i = 0; i < 3; ++i)
                (*cfg.bases)[i] = {b[i].at(0).get<double>(), b[i].at(1).get<double>()};
        }

        if (j.contains("params")) {
            const auto& p = j.at("params");
            auto& sp = cfg.params;
            sp.spacing = p.value("spacing", sp.spacing);
            sp.cell = p.value("cell", sp.cell);
            sp.lambda = p.value("lambda", sp.lambda);
            sp.N = p.value("N", sp.N);
            sp.tol = p.value("tol", sp.tol);
            if (p.contains("start"))
                sp.start = {p.at("start").at(0).get<double>(), p.at("start").at(1).get<double>()};
            sp.theta0 = p.value("theta0", sp.theta0);
            sp.T = p.value("T", sp.T);
            sp.eps = p.value("eps", sp.eps);
            if (p.contains("offset")) {
                const auto& o = p.at("offset");
                sp.offset_pos = {o.value("dx", 0.0), o.value("dy", 0.0)};
                sp.offset_theta = o.value("dtheta", 0.0);
            }
            sp.budget = p.value("budget", sp.budget);
            sp.n_squares = p.value("n_squares", sp.n_squares);
            sp.n_pairs = p.value("n_pairs", sp.n_pairs);
            sp.n_perturb = p.value("n_perturb", sp.n_perturb);
            sp.density = p.value("density", sp.density);
            if (p.contains("support")) {
                sp.support_a = p.at("support").at(0).get<double>();
                sp.support_b = p.at("support").at(1).get<double>();
            }
            if (p.contains("A1")) sp.A1 = detail::intervals_from_json(p.at("A1"));
            if (p.contains("B1")) sp.B1 = detail::intervals_from_json(p.at("B1"));
            for (auto [name, v] : {std::pair<const char*, double>{"spacing", sp.spacing},
                                   {"cell", sp.cell}}) {
                if (v < 0) throw ConfigError(std::string(name) + " must be positive");
            }
            if (!(sp.lambda > 0 && sp.lambda < 1))
                throw ConfigError("lambda must lie in (0, 1)");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const ExprError& e) {
        throw ConfigError(std::string("config expression: ") + e.what());
    }
    return cfg;
}

inline SceneConfig load_scene_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config JSON: ") + e.what());
    }
    return load_scene(j);
}

}  // namespace spraylab
