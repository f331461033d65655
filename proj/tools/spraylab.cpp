// spraylab command-line tool: integrate spray geodesics, evaluate the
// curvature condition, trace Jacobi scalars, build Minkowski averages,
// verify the Brunn-Minkowski inequality, search for violations, check the
// Randers metrization, and run the one-dimensional needle inequality.
//
// Exit codes: 0 verdict-pass, 1 verdict-fail, 2 configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spraylab/bm.hpp"
#include "spraylab/catalog.hpp"
#include "spraylab/curvature.hpp"
#include "spraylab/io.hpp"
#include "spraylab/jacobi.hpp"
#include "spraylab/metrize.hpp"
#include "spraylab/scene.hpp"

namespace fs = std::filesystem;
using namespace spraylab;

namespace {

struct Cli {
    std::string config_path;
    std::string out_dir = "out";
    std::string entry;
    uint64_t seed = 0;
    bool seed_set = false;
    double cell = 0.0, spacing = 0.0, lambda = 0.0, bigN = 0.0;
};

SceneConfig load(const Cli& cli) {
    SceneConfig cfg;
    if (!cli.config_path.empty()) {
        cfg = load_scene_file(cli.config_path);
    } else if (cli.entry.empty()) {
        throw ConfigError("provide --config or --entry");
    }
    if (!cli.entry.empty()) {  // --entry overrides the config's scene
        nlohmann::json j;
        j["entry"] = cli.entry;
        const SceneConfig overlay = load_scene(j);
        cfg.entry = overlay.entry;
        cfg.entry_name = overlay.entry_name;
        cfg.chart = overlay.chart;
        cfg.spray = overlay.spray;
        cfg.regions.insert_or_assign("working", overlay.entry->working);
    }
    if (cli.seed_set) cfg.seed = cli.seed;
    if (cli.cell > 0) cfg.params.cell = cli.cell;
    if (cli.spacing > 0) cfg.params.spacing = cli.spacing;
    if (cli.lambda > 0) cfg.params.lambda = cli.lambda;
    if (cli.bigN > 0) cfg.params.N = cli.bigN;
    return cfg;
}

Region pick_region(const SceneConfig& cfg, const std::string& name) {
    const auto it = cfg.regions.find(name);
    if (it != cfg.regions.end()) return it->second;
    if (cfg.entry) return cfg.entry->working;
    throw ConfigError("config does not define region '" + name + "'");
}

std::ofstream open_report(const Cli& cli) {
    fs::create_directories(cli.out_dir);
    std::ofstream rep(fs::path(cli.out_dir) / "report.txt");
    if (!rep) throw std::runtime_error("cannot write to " + cli.out_dir);
    return rep;
}

std::string out_path(const Cli& cli, const std::string& file) {
    return (fs::path(cli.out_dir) / file).string();
}

int run_geodesic(const Cli& cli) {
    const SceneConfig cfg = load(cli);
    const auto& p = cfg.params;
    Vec2 start = p.start;
    double theta0 = p.theta0, T = p.T;
    if (!(T != 0.0)) {
        if (!cfg.entry) throw ConfigError("geodesic needs params.T (and start, theta0)");
        start = cfg.entry->seed_start;
        theta0 = cfg.entry->seed_theta;
        T = cfg.entry->seed_T;
    }
    const Trajectory tr =
        integrate(cfg.chart, cfg.spray, start, theta0, T, std::min(p.tol, 1e-9));

    auto rep = open_report(cli);
    CsvWriter csv(out_path(cli, "geodesic.csv"), {"t", "x", "y", "theta"});
    std::vector<Vec2> pts;
    for (const auto& s : tr.resample(512)) {
        csv.row({s.t, s.x, s.y, s.theta});
        pts.push_back({s.x, s.y});
    }
    SvgScene svg(cfg.chart.bbox);
    svg.add_polyline(pts);
    svg.write(out_path(cli, "geodesic.svg"));

    const auto e = tr.endpoint();
    rep << "geodesic from (" << fmt12(start.x) << ", " << fmt12(start.y) << ") theta0 "
        << fmt12(theta0) << " arclength " << fmt12(T) << "\n"
        << "endpoint (" << fmt12(e.x) << ", " << fmt12(e.y) << ") theta " << fmt12(e.theta)
        << "\n"
        << "status " << (tr.ok() ? "ok" : tr.exited() ? "exited-domain" : "step-underflow")
        << ", accepted " << tr.n_accepted << ", rejected " << tr.n_rejected << "\n";
    return tr.status == TrajectoryStatus::StepUnderflow ? 1 : 0;
}

int run_check_condition(const Cli& cli, bool use_cd) {
    const SceneConfig cfg = load(cli);
    const Region region = pick_region(cfg, "working");
    CurvatureOptions opt;
    const auto report = use_cd ? check_cd0n(cfg.chart, cfg.spray, cfg.params.N, region, opt)
                               : check_nnc(cfg.chart, cfg.spray, region, opt);

    auto rep = open_report(cli);
    CsvWriter csv(out_path(cli, "condition.csv"), {"x", "y", "value"});
    for (size_t i = 0; i < report.points.size(); ++i)
        csv.row({report.points[i].x, report.points[i].y, report.values[i]});

    const BBox box = region_bbox(region);
    SvgScene svg(box);
    svg.add_heat(report.points, report.values, box.width() / opt.nx);
    svg.add_region_outline(region);
    svg.write(out_path(cli, "condition.svg"));

    rep << report.condition_name << (use_cd ? " N=" + fmt12(cfg.params.N) : "") << "\n"
        << "grid " << opt.nx << "x" << opt.ny << ", points " << report.points.size() << "\n"
        << "minimum " << fmt12(report.min_value) << " at (" << fmt12(report.min_location.x)
        << ", " << fmt12(report.min_location.y) << ")\n"
        << "magnetic defect " << fmt12(report.magnetic_defect) << "\n"
        << "verdict "
        << (report.verdict == ConditionVerdict::Nonnegative  ? "nonnegative"
            : report.verdict == ConditionVerdict::Negative   ? "negative"
                                                             : "condition fails: not magnetic")
        << "\n";
    return report.holds() ? 0 : 1;
}

int run_jacobi(const Cli& cli) {
    const SceneConfig cfg = load(cli);
    const auto& p = cfg.params;
    Vec2 start = p.start;
    double theta0 = p.theta0, T = p.T;
    if (T == 0.0) {
        if (!cfg.entry) throw ConfigError("jacobi needs params.T (and start, theta0)");
        start = cfg.entry->seed_start;
        theta0 = cfg.entry->seed_theta;
        T = cfg.entry->seed_T;
    }
    VariationSpec offset{p.offset_pos, p.offset_theta};
    const auto trace = jacobi_trace(cfg.chart, cfg.spray, start, theta0, T, offset, p.eps);
    const auto conc = concavity_check(trace);

    auto rep = open_report(cli);
    CsvWriter csv(out_path(cli, "jacobi.csv"), {"t", "J"});
    for (size_t i = 0; i < trace.t.size(); ++i) csv.row({trace.t[i], trace.J[i]});
    rep << "jacobi trace: " << trace.t.size() << " samples over [0, " << fmt12(T) << "]\n"
        << "max |J| " << fmt12(trace.max_abs()) << "\n"
        << "max second difference / h^2: " << fmt12(conc.max_second_difference) << "\n"
        << "verdict " << (conc.concave ? "concave" : "not concave") << "\n";
    return conc.concave ? 0 : 1;
}

int run_minkowski(const Cli& cli) {
    const SceneConfig cfg = load(cli);
    const Region A = pick_region(cfg, "A");
    const Region B = pick_region(cfg, "B");
    BmOptions opt;
    opt.cell = cfg.params.cell;
    opt.spacing = cfg.params.spacing;
    if (opt.spacing <= 0) {
        const double scale = std::max(region_bbox(A).diameter(), region_bbox(B).diameter());
        opt.spacing = (opt.cell > 0 ? opt.cell : scale / 24.0) / 2.0;
    }
    size_t failures = 0;
    const auto cloud = minkowski_average(cfg.chart, cfg.spray, sample_region(A, opt.spacing),
                                         sample_region(B, opt.spacing), cfg.params.lambda, opt,
                                         &failures);

    auto rep = open_report(cli);
    CsvWriter csv(out_path(cli, "minkowski.csv"), {"x", "y"});
    for (const auto& q : cloud.points) csv.row({q.x, q.y});

    BBox box = region_bbox(A);
    const BBox bb = region_bbox(B);
    box.lo.x = std::min(box.lo.x, bb.lo.x);
    box.lo.y = std::min(box.lo.y, bb.lo.y);
    box.hi.x = std::max(box.hi.x, bb.hi.x);
    box.hi.y = std::max(box.hi.y, bb.hi.y);
    SvgScene svg(box);
    svg.add_points(cloud.points, "#9467bd", 0.8);
    svg.add_region_outline(A);
    svg.add_region_outline(B, "#ff7f0e");
    svg.write(out_path(cli, "minkowski.svg"));

    rep << "minkowski average at lambda " << fmt12(cfg.params.lambda) << "\n"
        << "image points " << cloud.points.size() << ", shooting failures " << failures << "\n";
    return 0;
}

int run_verify_bm(const Cli& cli) {
    const SceneConfig cfg = load(cli);
    const Region A = pick_region(cfg, "A");
    const Region B = pick_region(cfg, "B");
    BmOptions opt;
    opt.cell = cfg.params.cell;
    opt.spacing = cfg.params.spacing;
    opt.N = cfg.params.N;
    const auto r = verify_bm(cfg.chart, cfg.spray, A, B, cfg.params.lambda, opt);

    auto rep = open_report(cli);
    CsvWriter csv(out_path(cli, "bm.csv"),
                  {"lambda", "N", "area_a", "area_b", "area_avg", "lhs", "rhs", "margin",
                   "spacing", "cell", "pairs", "failures"});
    csv.row({r.lambda, r.N, r.area_a, r.area_b, r.area_avg, r.lhs, r.rhs, r.margin, r.spacing,
             r.cell, static_cast<double>(r.n_pairs), static_cast<double>(r.n_failures)});
    rep << "brunn-minkowski at lambda " << fmt12(r.lambda) << ", exponent 1/" << fmt12(r.N)
        << "\n"
        << "areas: A " << fmt12(r.area_a) << ", B " << fmt12(r.area_b) << ", average "
        << fmt12(r.area_avg) << "\n"
        << "lhs " << fmt12(r.lhs) << "  rhs " << fmt12(r.rhs) << "  margin " << fmt12(r.margin)
        << " (" << fmt12(100 * r.margin / r.rhs) << "% of rhs)\n"
        << "sampling " << fmt12(r.spacing) << ", cell " << fmt12(r.cell) << ", pairs "
        << r.n_pairs << ", failures " << r.n_failures << "\n"
        << "verdict " << (r.holds ? "holds" : "fails") << " at tolerance "
        << fmt12(100 * r.tol_rel) << "% of rhs\n";
    return r.holds ? 0 : 1;
}

int run_find_violation(const Cli& cli) {
    const SceneConfig cfg = load(cli);
    GeodesicSeed seed{cfg.params.start, cfg.params.theta0, cfg.params.T};
    if (seed.T == 0.0) {
        if (!cfg.entry) throw ConfigError("find-violation needs params.T (and start, theta0)");
        seed = {cfg.entry->seed_start, cfg.entry->seed_theta, cfg.entry->seed_T};
    }
    const auto res = find_violation(cfg.chart, cfg.spray, seed, cfg.params.budget);

    auto rep = open_report(cli);
    if (res.status == ViolationStatus::Found) {
        rep << "violation found near arclength " << fmt12(res.t_star) << "\n"
            << "margin " << fmt12(res.report.margin) << " ("
            << fmt12(100 * res.report.margin / res.report.rhs) << "% of rhs) after "
            << res.levels_tried << " strip levels\n";
        nlohmann::json strips;
        for (const auto* reg : {&res.A, &res.B}) {
            nlohmann::json poly = nlohmann::json::array();
            for (const auto& v : reg->vertices) poly.push_back({v.x, v.y});
            strips[reg == &res.A ? "A" : "B"] = {{"polygon", poly}};
        }
        strips["lambda"] = res.lambda;
        std::ofstream(out_path(cli, "violation.json")) << strips.dump(2) << "\n";
        return 0;
    }
    rep << (res.status == ViolationStatus::None
                ? "no violation: J concave along the seed geodesic\n"
                : "inconclusive within budget\n");
    return 1;
}

int run_metrize(const Cli& cli) {
    const SceneConfig cfg = load(cli);
    Region U = pick_region(cfg, "U");
    if (!cfg.bases) throw ConfigError("metrize needs 'bases': three points outside U");
    MetrizationOptions opt;
    opt.seed = cfg.seed;
    opt.n_squares = cfg.params.n_squares;
    opt.n_pairs = cfg.params.n_pairs;
    opt.n_perturb = cfg.params.n_perturb;
    const auto r = verify_metrization(cfg.chart, cfg.spray, U, *cfg.bases, opt);

    auto rep = open_report(cli);
    CsvWriter csv(out_path(cli, "eta_grid.csv"), {"x", "y", "eta_norm"});
    for (size_t i = 0; i < r.grid_points.size(); ++i)
        csv.row({r.grid_points[i].x, r.grid_points[i].y, r.grid_eta[i]});
    rep << "randers metrization on U\n"
        << "sup |eta|_g " << fmt12(r.sup_eta) << " (margin below 1: " << fmt12(r.eta_margin)
        << ")\n"
        << "max stokes residual " << fmt12(r.max_stokes_residual) << " over " << r.n_squares
        << " squares\n"
        << "min F-length gap " << fmt12(r.min_length_gap) << " over " << r.n_pairs << " pairs x "
        << r.n_perturb << " perturbations\n"
        << (r.bases_check_incomplete ? "note: base collinearity check was shooting-limited\n"
                                     : "")
        << "verdict " << (r.ok() ? "metrizable" : "checks failed") << "\n";
    return r.ok() ? 0 : 1;
}

int run_needle(const Cli& cli) {
    const SceneConfig cfg = load(cli);
    const auto& p = cfg.params;
    const Expression dens = Expression::parse(p.density);
    NeedleDensity d;
    d.value = [dens](double t) { return dens.eval(t, 0.0); };
    d.a = p.support_a;
    d.b = p.support_b;
    IntervalSet A, B;
    for (const auto& [a, b] : p.A1) A.push_back({a, b});
    for (const auto& [a, b] : p.B1) B.push_back({a, b});
    const auto r = needle_bm_1d(d, A, B, p.lambda);

    auto rep = open_report(cli);
    CsvWriter csv(out_path(cli, "needle.csv"),
                  {"lambda", "mass_a", "mass_b", "mass_avg", "lhs", "rhs", "margin"});
    csv.row({p.lambda, r.mass_a, r.mass_b, r.mass_avg, r.lhs, r.rhs, r.margin});
    rep << "needle inequality at lambda " << fmt12(p.lambda) << "\n"
        << "masses: A " << fmt12(r.mass_a) << ", B " << fmt12(r.mass_b) << ", average "
        << fmt12(r.mass_avg) << "\n"
        << "lhs " << fmt12(r.lhs) << "  rhs " << fmt12(r.rhs) << "  margin " << fmt12(r.margin)
        << "\n";
    return r.margin >= -1e-9 ? 0 : 1;
}

int run_catalog(const Cli&, const std::string& action) {
    if (action != "list") throw ConfigError("catalog supports: list");
    for (const auto& n : catalog_names()) std::cout << n << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for sprays on conformal surfaces"};
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--config", cli.config_path, "scene configuration (JSON)");
    app.add_option("--out", cli.out_dir, "output directory");
    app.add_option("--entry", cli.entry, "catalog entry name");
    auto* seed_opt = app.add_option("--seed", cli.seed, "random seed");
    app.add_option("--cell", cli.cell, "rasterization cell size");
    app.add_option("--spacing", cli.spacing, "sampling spacing");
    app.add_option("--lambda", cli.lambda, "interpolation parameter");
    app.add_option("--bigN", cli.bigN, "dimension parameter N");

    auto* geodesic = app.add_subcommand("geodesic", "integrate a spray geodesic");
    auto* check = app.add_subcommand("check-condition", "evaluate the curvature condition");
    bool use_cd = false;
    check->add_flag("--cd", use_cd, "check the CD(0,N) condition instead");
    auto* jacobi = app.add_subcommand("jacobi", "trace the Jacobi scalar and test concavity");
    auto* minkowski = app.add_subcommand("minkowski", "emit the Minkowski average cloud");
    auto* verify = app.add_subcommand("verify-bm", "verify the Brunn-Minkowski inequality");
    auto* violation = app.add_subcommand("find-violation", "search for a BM violation");
    auto* metrize = app.add_subcommand("metrize", "verify the Randers metrization");
    auto* needle = app.add_subcommand("needle1d", "one-dimensional needle inequality");
    auto* catalog = app.add_subcommand("catalog", "catalog operations");
    std::string catalog_action = "list";
    catalog->add_option("action", catalog_action, "list");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
        cli.seed_set = seed_opt->count() > 0;

        if (geodesic->parsed()) return run_geodesic(cli);
        if (check->parsed()) return run_check_condition(cli, use_cd);
        if (jacobi->parsed()) return run_jacobi(cli);
        if (minkowski->parsed()) return run_minkowski(cli);
        if (verify->parsed()) return run_verify_bm(cli);
        if (violation->parsed()) return run_find_violation(cli);
        if (metrize->parsed()) return run_metrize(cli);
        if (needle->parsed()) return run_needle(cli);
        if (catalog->parsed()) return run_catalog(cli, catalog_action);
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
