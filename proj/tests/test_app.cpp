#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "perpconj/app.hpp"
#include "perpconj/error.hpp"

#include "json.hpp"

using namespace perpconj;
using namespace perpconj::app;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

Input data_file(const std::string& name) { return read_input(std::string(PERPCONJ_DATA_DIR) + "/" + name); }

Input inline_input(std::string name, std::string text) { return Input{std::move(name), std::move(text)}; }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("region parsing", "[app]") {
    const auto r = parse_region("-3:3,0.5:1e1");
    REQUIRE(r.dimension() == 2);
    CHECK(r.bounds[0].lo == -3.0);
    CHECK(r.bounds[1].hi == 10.0);
    CHECK_THROWS_AS(parse_region("3:-3"), ValidationError);
    CHECK_THROWS_AS(parse_region("1"), ValidationError);
    CHECK_THROWS_AS(parse_region("a:b"), ValidationError);
    CHECK_THROWS_AS(parse_region(""), ValidationError);
}

TEST_CASE("formats", "[app]") {
    CHECK(parse_format("json") == Format::Json);
    CHECK(parse_format("csv") == Format::Csv);
    CHECK_THROWS_AS(parse_format("xml"), ValidationError);
}

TEST_CASE("system file errors", "[app]") {
    CHECK_THROWS_AS(parse_system_file(inline_input("a", "{")), ValidationError);
    CHECK_THROWS_AS(parse_system_file(inline_input("a", "[]")), ValidationError);
    CHECK_THROWS_AS(parse_system_file(inline_input("a", R"({"name":"s","state":["x"],"field":["x"],"extra":1})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_system_file(inline_input("a", R"({"name":"s","state":["x"]})")), ValidationError);
    CHECK_THROWS_AS(parse_system_file(inline_input("a", R"({"name":"s","state":["x"],"field":["x +"]})")), Error);
    CHECK_THROWS_AS(parse_system_file(inline_input("a", R"({"name":"s","state":["x"],"field":["x","x"]})")),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_system_file(inline_input("a", R"({"name":"s","state":["x"],"field":["x"],"region":[[1,0]]})")),
        ValidationError);
    const auto ok = parse_system_file(data_file("example1.json"));
    CHECK(ok.definition.name == "example1");
    REQUIRE(ok.region);
    CHECK(ok.region->bounds[0].lo == -3.0);
}

TEST_CASE("map file errors", "[app]") {
    const std::vector<std::string> x{"x"};
    CHECK_THROWS_AS(parse_map_file(inline_input("m", R"({"map":["2*x"]})"), x), ValidationError);
    CHECK_THROWS_AS(parse_map_file(inline_input("m", R"({"map":["2*x"],"domain":[[0,1]],"linear":"yes"})"), x),
                    ValidationError);
    CHECK_THROWS_AS(parse_map_file(inline_input("m", R"({"map":["2*x"],"domain":[[0,1]],"state":["x"]})"), x),
                    ValidationError);
    const auto m = parse_map_file(data_file("affine_map.json"), x);
    CHECK(m.linear);
    CHECK(m.target_names == std::vector<std::string>{"y"});
    REQUIRE(m.inverse);
}

TEST_CASE("missing files", "[app]") { CHECK_THROWS_AS(read_input("/nonexistent/file.json"), ValidationError); }

TEST_CASE("sha256", "[app]") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("number formatting", "[app]") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.0) == "-2");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("analyze report", "[app]") {
    const auto text = analyze_command(data_file("example1.json"), AnalyzeOptions{});
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc["tool"] == "perpconj");
    CHECK(doc["command"] == "analyze");
    REQUIRE(doc["fixed_points"].size() == 2);
    REQUIRE(doc["perpetual_points"].size() == 1);
    CHECK_THAT(doc["perpetual_points"][0]["location"][0].get<double>(), WithinAbs(0.0, 1e-10));
    CHECK(doc["inputs"][0]["sha256"].get<std::string>().size() == 64);
    CHECK(text.find('\r') == std::string::npos);

    AnalyzeOptions opts;
    opts.format = Format::Csv;
    const auto csv = lines(analyze_command(data_file("example1.json"), opts));
    REQUIRE(csv.size() == 4);
    CHECK(csv[0] == "kind,x,v_x,speed,residual,spectrum,degenerate,boundary");
}

TEST_CASE("analysis is reproducible", "[app]") {
    AnalyzeOptions opts;
    opts.solver.rng_seed = 7;
    const auto a = analyze_command(data_file("saddle2d.json"), opts);
    const auto b = analyze_command(data_file("saddle2d.json"), opts);
    CHECK(a == b);
}

TEST_CASE("region without file region", "[app]") {
    const auto in = inline_input("s", R"({"name":"s","state":["x"],"field":["x"]})");
    CHECK_THROWS_AS(analyze_command(in, AnalyzeOptions{}), ValidationError);
    AnalyzeOptions opts;
    opts.region = parse_region("-1:1");
    CHECK_NOTHROW(analyze_command(in, opts));
    opts.region = parse_region("-1:1,-1:1");
    CHECK_THROWS_AS(analyze_command(in, opts), ValidationError);
}

TEST_CASE("nilpotent system is flagged", "[app]") {
    const auto doc = nlohmann::json::parse(analyze_command(data_file("nilpotent.json"), AnalyzeOptions{}));
    CHECK(doc["summary"]["degenerate_flag"] == true);
    CHECK_FALSE(doc["warnings"].empty());
}

TEST_CASE("transform round trip", "[app]") {
    const auto out = transform_command(data_file("example1.json"), data_file("affine_map.json"), AnalyzeOptions{});
    const auto g = parse_system_file(inline_input("g", out.system_file));
    REQUIRE(g.region);
    const VectorField gf(g.definition);
    const VectorField f(parse_system_file(data_file("example1.json")).definition);
    // g(2x + 5) = 2 f(x)
    for (double x : {-2.5, -1.0, 0.0, 0.4, 2.9}) {
        const std::vector<double> y{2 * x + 5};
        const std::vector<double> xs{x};
        CHECK_THAT(gf.value(y)[0], WithinAbs(2 * f.value(xs)[0], 1e-8));
    }
    const auto doc = nlohmann::json::parse(out.report);
    REQUIRE(doc["fixed_points"].size() == 2);
    CHECK_THAT(doc["fixed_points"][0]["location"][0].get<double>(), WithinAbs(3.0, 1e-8));
    CHECK_THAT(doc["fixed_points"][1]["location"][0].get<double>(), WithinAbs(7.0, 1e-8));

    CHECK_THROWS_AS(transform_command(data_file("example1.json"),
                                      inline_input("m", R"({"map":["2*x"],"domain":[[0,1]],"linear":true})"),
                                      AnalyzeOptions{}),
                    ValidationError);
}

TEST_CASE("verify command", "[app]") {
    const auto ok = verify_command(data_file("example1.json"), data_file("affine_map.json"), std::nullopt,
                                   VerifyOptions{});
    CHECK(ok.passed);
    const auto doc = nlohmann::json::parse(ok.report);
    CHECK(doc["passed"] == true);
    CHECK(doc["checks"].size() == 5);

    const auto wrong = inline_input("g", R"({"name":"g","state":["y"],"field":["(y - 5)^2 - 3"]})");
    VerifyOptions opts;
    opts.theorems = parse_theorem_list("t1,flow");
    const auto bad = verify_command(data_file("example1.json"), data_file("affine_map.json"), wrong, opts);
    CHECK_FALSE(bad.passed);

    const auto square = verify_command(data_file("example1.json"), data_file("square_map.json"), std::nullopt,
                                       VerifyOptions{});
    CHECK(square.passed);
    CHECK_THAT(square.report, ContainsSubstring("advisory"));

    opts.format = Format::Csv;
    const auto csv = lines(verify_command(data_file("example1.json"), data_file("affine_map.json"), std::nullopt, opts).report);
    CHECK(csv.front() == "theorem,verdict,worst_residual,tolerance");
}

TEST_CASE("portrait grid", "[app]") {
    PortraitOptions opts;
    const auto one = portrait_command(data_file("example1.json"), opts);
    const auto rows = lines(one.grid_csv);
    CHECK(rows.front() == "x,f1,F1");
    CHECK(rows.size() == 102);
    CHECK(one.grid_csv.find('\r') == std::string::npos);

    opts.grid = {5, 4};
    opts.starts = {{0.5, 0.0}};
    opts.t_end = 1.0;
    opts.samples = 11;
    const auto two = portrait_command(data_file("rotation.json"), opts);
    const auto rows2 = lines(two.grid_csv);
    CHECK(rows2.front() == "x,y,f1,f2,F1,F2");
    CHECK(rows2.size() == 21);
    REQUIRE(two.trajectory_csv.size() == 1);
    const auto traj = lines(two.trajectory_csv[0]);
    CHECK(traj.front() == "t,x,y");
    CHECK(traj.size() == 12);
    for (const auto& r : rows2) CHECK(r.find(';') == std::string::npos);

    opts.grid = {5, 4, 3};
    CHECK_THROWS_AS(portrait_command(data_file("rotation.json"), opts), ValidationError);
}
