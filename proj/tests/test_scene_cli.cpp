#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spraylab/scene.hpp"
#include "test_support.hpp"

using namespace spraylab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SPRAYLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path write_config(const std::string& name, const nlohmann::json& j) {
    const fs::path dir = fs::temp_directory_path() / "spraylab_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

}  // namespace

TEST_CASE("scene: catalog entry shorthand") {
    nlohmann::json j;
    j["entry"] = "circular_arcs(0.5,2)";
    const auto cfg = load_scene(j);
    CHECK(cfg.entry_name == "circular_arcs");
    CHECK(cfg.entry.has_value());
    CHECK(cfg.spray.magnetic_kappa({0.1, 0.1}) == Catch::Approx(0.5));
}

TEST_CASE("scene: explicit chart and spray from expressions") {
    nlohmann::json j;
    j["chart"] = {{"psi", "0"}, {"bbox", {-3.0, -3.0, 3.0, 3.0}}};
    j["spray"] = {{"kappa", "1/r"}};
    j["regions"] = {{"A", {{"disc", {1.0, 0.0, 0.3}}}}};
    j["params"] = {{"lambda", 0.25}, {"T", 2.0}};
    const auto cfg = load_scene(j);
    CHECK(cfg.chart.inside({1, 1}));
    CHECK(cfg.spray.is_magnetic());
    CHECK(cfg.spray.k(2, 0, 0.7) == Catch::Approx(0.5));
    CHECK(cfg.params.lambda == 0.25);
    CHECK(region_contains(cfg.regions.at("A"), {1.1, 0.1}));

    // FD derivatives of an expression-backed chart track the analytic ones
    nlohmann::json jj;
    jj["chart"] = {{"psi", "-log(y)"}, {"bbox", {-2.0, 0.1, 2.0, 3.0}}};
    jj["spray"] = {{"constant", 0.0}};
    const auto hp = load_scene(jj);
    CHECK(gauss_curvature(hp.chart, {0.3, 1.2}) == Catch::Approx(-1.0).margin(1e-5));
}

TEST_CASE("scene: config errors are reported") {
    nlohmann::json j;
    j["chart"] = {{"psi", "sqrt(-1"}};
    j["spray"] = {{"constant", 1.0}};
    CHECK_THROWS_AS(load_scene(j), ConfigError);

    nlohmann::json j2;
    j2["entry"] = "nonexistent_entry";
    CHECK_THROWS_AS(load_scene(j2), std::invalid_argument);

    nlohmann::json j3;
    j3["chart"] = {{"psi", "0"}};
    j3["spray"] = {{"k", "cos(theta)"}};  // direction-dependent, not magnetic
    const auto cfg = load_scene(j3);
    CHECK_FALSE(cfg.spray.is_magnetic());

    nlohmann::json j4;
    j4["chart"] = {{"psi", "0"}};
    j4["spray"] = {{"constant", 1.0}};
    j4["params"] = {{"lambda", 1.5}};
    CHECK_THROWS_AS(load_scene(j4), ConfigError);
}

TEST_CASE("cli: catalog list exits 0 with eight entries") {
    const fs::path out = fs::temp_directory_path() / "spraylab_tests" / "list.txt";
    fs::create_directories(out.parent_path());
    const std::string cmd =
        std::string(SPRAYLAB_CLI_PATH) + " catalog list > " + out.string() + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::ifstream in(out);
    int lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 8);
}

TEST_CASE("cli: exit codes follow the verdicts") {
    CHECK(run_cli("check-condition --entry horocycles --out /tmp/spraylab_t1") == 0);
    CHECK(run_cli("check-condition --entry kappa_3x --out /tmp/spraylab_t2") == 1);
    CHECK(run_cli("check-condition --entry nonexistent --out /tmp/spraylab_t3") == 2);
    CHECK(run_cli("geodesic --out /tmp/spraylab_t4") == 2);  // no config, no entry
}

TEST_CASE("cli: identical config and seed give byte-identical CSV output") {
    nlohmann::json j;
    j["seed"] = 7;
    j["entry"] = "horocycles";
    j["params"] = {{"start", {0.0, 1.0}}, {"theta0", 0.0}, {"T", 2.5}};
    const auto cfgp = write_config("determinism.json", j);

    const std::string base = "geodesic --config " + cfgp.string();
    REQUIRE(run_cli(base + " --out /tmp/spraylab_d1") == 0);
    REQUIRE(run_cli(base + " --out /tmp/spraylab_d2") == 0);
    const auto a = slurp("/tmp/spraylab_d1/geodesic.csv");
    const auto b = slurp("/tmp/spraylab_d2/geodesic.csv");
    REQUIRE(!a.empty());
    CHECK(a == b);

    // and the jacobi artifact too
    nlohmann::json jj = j;
    jj["params"]["offset"] = {{"dx", 0.0}, {"dy", 1.0}};
    const auto cfgj = write_config("determinism_j.json", jj);
    REQUIRE(run_cli("jacobi --config " + cfgj.string() + " --out /tmp/spraylab_d3") == 0);
    REQUIRE(run_cli("jacobi --config " + cfgj.string() + " --out /tmp/spraylab_d4") == 0);
    CHECK(slurp("/tmp/spraylab_d3/jacobi.csv") == slurp("/tmp/spraylab_d4/jacobi.csv"));
}

TEST_CASE("cli: needle subcommand on the frozen example") {
    nlohmann::json j;
    j["chart"] = {{"psi", "0"}};
    j["spray"] = {{"constant", 0.0}};
    j["params"] = {{"density", "1"},
                   {"support", {0.0, 1.0}},
                   {"A1", {{0.0, 0.1}}},
                   {"B1", {{0.8, 1.0}}},
                   {"lambda", 0.5}};
    const auto cfg = write_config("needle.json", j);
    REQUIRE(run_cli("needle1d --config " + cfg.string() + " --out /tmp/spraylab_n1") == 0);
    const auto csv = slurp("/tmp/spraylab_n1/needle.csv");
    CHECK(csv.find("0.387298334621") != std::string::npos);
}
