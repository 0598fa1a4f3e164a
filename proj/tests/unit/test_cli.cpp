#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "commands.hpp"
#include "scene.hpp"

using nlohmann::json;
using newton_flow::cli::run_cli;

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("newton_flow_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string write(const std::string& name, const json& doc) const {
        const auto p = path_ / name;
        std::ofstream(p) << doc.dump(2);
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"--help"}).out.find("algebra") != std::string::npos);
    CHECK(cli({"flow", "--help"}).code == 0);
    CHECK(cli({}).code == 2);
    CHECK(cli({"bogus"}).code == 2);
    CHECK(cli({"algebra", "--k", "1,x"}).code == 2);
    CHECK(cli({"algebra"}).code == 2);
    CHECK(cli({"gap"}).code == 2);
    CHECK(cli({"residual", "--config", "/nonexistent/scene.json"}).code == 2);
}

TEST_CASE("algebra on a curvature list") {
    const auto r = cli({"algebra", "--k", "1,2,3", "--r", "2"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["sigma"][2].get<double>() == doctest::Approx(11.0));
    CHECK(doc["modified_norm_sq"].get<double>() == doctest::Approx(6.0 * 11.0 - 3.0 * 6.0));
    CHECK(doc["p_definiteness"] == "PositiveDefinite");
    CHECK(doc["p_eigenvalue_law"].size() == 3);
    CHECK(doc["cauchy_schwarz"]["holds"] == true);

    const auto saddle = json::parse(cli({"algebra", "--k", "1,-2,0.5", "--r", "2"}).out);
    CHECK(saddle["cauchy_schwarz"].is_null());
    CHECK(cli({"algebra", "--k", "1,2", "--r", "3"}).code == 3);
}

TEST_CASE("algebra presets reproduce the boundary value r") {
    for (int n = 2; n <= 5; ++n) {
        for (int m = 1; m < n; ++m) {
            for (int r = 1; r <= m; ++r) {
                const std::string preset = "cyl:n=" + std::to_string(n) + ",m=" + std::to_string(m) +
                                           ",r=" + std::to_string(r);
                const auto out = cli({"algebra", "--preset", preset});
                REQUIRE(out.code == 0);
                CHECK(json::parse(out.out)["modified_norm_sq"].get<double>() == doctest::Approx(r).epsilon(1e-12));
            }
        }
    }
    CHECK(json::parse(cli({"algebra", "--preset", "sphere:n=4,r=3"}).out)["modified_norm_sq"].get<double>() ==
          doctest::Approx(3.0));
    CHECK(cli({"algebra", "--preset", "cyl:n=3,m=3,r=1"}).code == 3);
    CHECK(cli({"algebra", "--preset", "torus:n=3"}).code == 2);
    CHECK(cli({"algebra", "--preset", "sphere:n=2,r=1", "--k", "1,1"}).code == 2);
}

TEST_CASE("scene schema") {
    using newton_flow::cli::parse_scene;
    using newton_flow::cli::SchemaError;
    CHECK_THROWS_AS(parse_scene(json{{"modle", 1}}), SchemaError);
    CHECK_THROWS_AS(parse_scene(json{{"model", {{"type", "sphere"}, {"n", 2}}}}), SchemaError);
    CHECK_THROWS_AS(parse_scene(json{{"model", {{"type", "sphere"}, {"n", 2}, {"radius", "big"}}}}), SchemaError);
    CHECK_THROWS_AS(parse_scene(json{{"model", {{"type", "sphere"}, {"n", 2}, {"radius", 1}, {"extra", 0}}}}),
                    SchemaError);
    CHECK_THROWS_AS(parse_scene(json{{"r", 1.5}}), SchemaError);
    CHECK_THROWS_AS(parse_scene(json{{"flow", {{"integrator", "rk4"}}}}), SchemaError);
    CHECK_THROWS_AS(parse_scene(json{{"model", {{"type", "revolution"}, {"profile", {{"kind", "torus"}}}}}}),
                    SchemaError);
    const auto ok = parse_scene(json{{"model", {{"type", "cylinder"}, {"n", 3}, {"m", 2}, {"radius", "shrinker"}}},
                                     {"r", 2},
                                     {"flow", {{"t_end", 0.1}, {"integrator", "rk2"}}}});
    CHECK(ok.r == 2);
    CHECK(ok.flow.t_end.value() == 0.1);
    const auto model = newton_flow::cli::build_model(*ok.model, ok.r);
    CHECK(std::get<newton_flow::catalog::Cylinder>(model).radius == doctest::Approx(std::cbrt(1.0)));
}

TEST_CASE("residual and gap commands") {
    TempDir dir;
    const auto shrinker = dir.write("s.json", {{"model", {{"type", "sphere"}, {"n", 3}, {"radius", "shrinker"}}},
                                               {"r", 3},
                                               {"resolution", 8}});
    const auto res = cli({"residual", "--config", shrinker});
    REQUIRE(res.code == 0);
    CHECK(json::parse(res.out)["sup_residual"].get<double>() <= 1e-12);

    const auto gap = cli({"gap", "--config", shrinker});
    REQUIRE(gap.code == 0);
    const auto doc = json::parse(gap.out);
    CHECK(doc["classification"] == "sphere");
    CHECK(doc.contains("gauss"));
    CHECK(doc["gauss"]["supHK"].get<double>() == doctest::Approx(3.0));

    const auto cyl = dir.write("c.json", {{"model", {{"type", "cylinder"}, {"n", 3}, {"m", 1}, {"radius", 1.0}}},
                                          {"r", 2},
                                          {"resolution", 8}});
    const auto out_path = dir.file("gap.json");
    REQUIRE(cli({"gap", "--config", cyl, "--out", out_path}).code == 0);
    CHECK(json::parse(slurp(out_path))["classification"] == "not_shrinker");

    const auto bad = dir.write("b.json", {{"model", {{"type", "sphere"}, {"n", 2}, {"radius", -1.0}}}});
    CHECK(cli({"gap", "--config", bad}).code == 3);
    CHECK(cli({"gap", "--config", shrinker, "--r", "4"}).code == 3);
}

TEST_CASE("flow command writes csv and summary") {
    TempDir dir;
    const auto scene = dir.write("f.json", {{"model", {{"type", "sphere"}, {"n", 1}, {"radius", 1.0}}},
                                            {"flow", {{"t_end", 0.1}, {"resolution", 64}, {"output_stride", 50}}}});
    const auto csv = dir.file("d.csv");
    const auto run = cli({"flow", "--config", scene, "--out", csv});
    REQUIRE(run.code == 0);
    const auto summary = json::parse(run.out);
    CHECK(summary["status"] == "completed");
    CHECK(summary["analytic_extinction_time"].get<double>() == doctest::Approx(0.5));
    const auto text = slurp(csv);
    CHECK(text.rfind("t,max_residual,homothety_defect,min_radius,dt\n", 0) == 0);
    const auto lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == summary["records"].get<long>() + 1);
}

TEST_CASE("flow exit codes for extinction") {
    TempDir dir;
    // Extinction at the closed-form time is expected.
    const auto expected = dir.write("e.json", {{"model", {{"type", "sphere"}, {"n", 1}, {"radius", 1.0}}},
                                               {"flow", {{"t_end", 1.0}, {"resolution", 32}}}});
    const auto a = cli({"flow", "--config", expected});
    CHECK(a.code == 0);
    CHECK(json::parse(a.out)["status"] == "extinct");
    // A closed ellipsoid has no closed-form time.
    const auto early = dir.write("x.json", {{"model", {{"type", "ellipsoid_rev"}, {"a", 1.0}, {"b", 2.0}}},
                                            {"flow", {{"t_end", 5.0}, {"resolution", 32}}}});
    const auto b = cli({"flow", "--config", early});
    CHECK(b.code == 4);
    CHECK(b.err.find("extinct") != std::string::npos);
}

TEST_CASE("verify runs the identity suites") {
    TempDir dir;
    const auto out_path = dir.file("v.json");
    const auto all = cli({"verify", "--all", "--out", out_path});
    CHECK(all.code == 0);
    CHECK(all.out.find("FAIL") == std::string::npos);
    const auto doc = json::parse(slurp(out_path));
    CHECK(doc["passed"] == true);
    CHECK(doc["suites"].size() == 11);

    const auto scene = dir.write("e.json", {{"model", {{"type", "ellipsoid_rev"}}}, {"r", 2}});
    CHECK(cli({"verify", "--config", scene}).code == 0);
    // Too coarse for the asymptotic order band.
    CHECK(cli({"verify", "--config", scene, "--resolutions", "8,12"}).code == 5);
    CHECK(cli({"verify", "--config", scene, "--resolutions", "64"}).code == 2);
}

TEST_CASE("output is deterministic") {
    const auto a = cli({"algebra", "--k", "0.3,-1.7,2.2,0.9", "--r", "3"});
    const auto b = cli({"algebra", "--k", "0.3,-1.7,2.2,0.9", "--r", "3", "--seed", "42"});
    CHECK(a.out == b.out);
}
