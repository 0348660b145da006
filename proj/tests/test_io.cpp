#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hipmlab/errors.hpp"
#include "hipmlab/io.hpp"
#include "test_support.hpp"

using namespace hipmlab;
using namespace testsupport;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "hipmlab_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("format_double keeps 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.625) == "0.625");
}

TEST_CASE("measure CSV round-trips exactly") {
    Rng rng(80);
    auto p = random_measure(rng, 10, -1.0, 1.0);
    auto path = temp_file("measure.csv");
    write_measure_csv(p, path);
    auto back = read_measure_csv(path);
    CHECK(back.atoms == p.atoms);
    CHECK(back.weights == p.weights);
}

TEST_CASE("law CSV round-trips exactly") {
    Rng rng(81);
    auto law = random_law(rng, 4, 6, -2.0, 3.0);
    auto path = temp_file("law.csv");
    write_law_csv(law, path);
    auto back = read_law_csv(path);
    REQUIRE(back.size() == law.size());
    for (std::size_t i = 0; i < law.size(); ++i) {
        CHECK(back.members[i].atoms == law.members[i].atoms);
        CHECK(back.members[i].weights == law.members[i].weights);
    }
}

TEST_CASE("CSV parse errors carry line numbers") {
    auto path = temp_file("bad.csv");
    write_text(path, "member,atom,weight\n0,0.5,1.0\n0,oops,0.5\n");
    try {
        read_law_csv(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }

    write_text(path, "wrong,header\n");
    CHECK_THROWS_AS(read_law_csv(path), ParseError);

    write_text(path, "member,atom,weight\n2,0.5,1.0\n");
    CHECK_THROWS_AS(read_law_csv(path), ParseError);  // indices must be contiguous

    write_text(path, "member,atom,weight\n0,0.5,0.7\n");
    CHECK_THROWS_AS(read_law_csv(path), ParseError);  // weights must sum to 1

    CHECK_THROWS_AS(read_law_csv(temp_file("missing.csv")), ParseError);
}

TEST_CASE("gridded law JSON round-trips") {
    GriddedLaw law;
    law.grid = Grid(0.0, 1.0, 3);
    law.members = 2;
    law.weights = {0.25, 0.25, 0.5, 1.0, 0.0, 0.0};
    auto path = temp_file("gridded.json");
    write_gridded_json(law, path);
    auto back = read_gridded_json(path);
    CHECK(back.grid.a == law.grid.a);
    CHECK(back.grid.b == law.grid.b);
    CHECK(back.grid.points == law.grid.points);
    CHECK(back.weights == law.weights);

    write_text(path, "{\"a\": 0, \"b\": 1, \"M\": 3, \"weights\": [0.5, 0.5]}");
    CHECK_THROWS_AS(read_gridded_json(path), ShapeError);
    write_text(path, "{\"a\": 0, \"b\": 1, \"M\": 3, \"weights\": [0.5, 0.4, 0.0]}");
    CHECK_THROWS_AS(read_gridded_json(path), std::invalid_argument);  // row sum != 1
    write_text(path, "not json");
    CHECK_THROWS_AS(read_gridded_json(path), ParseError);
}

TEST_CASE("cost matrix debug dump") {
    CostMatrix c{2, {0.0, 0.25, 1.0, 0.5}};
    auto path = temp_file("cost.csv");
    write_cost_matrix_csv(c, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "0,0.25");
    std::getline(in, line);
    CHECK(line == "1,0.5");
}

TEST_CASE("ascent config JSON round-trips") {
    AscentConfig config;
    config.n_init = 5;
    config.n_step = 123;
    config.epsilon = 1e-9;
    config.include_identity_init = false;
    config.seed = 99;
    config.line_search = LineSearchRule::full_gradient;
    auto back = ascent_config_from_json(ascent_config_to_json(config));
    CHECK(back.n_init == config.n_init);
    CHECK(back.n_step == config.n_step);
    CHECK(back.epsilon == config.epsilon);
    CHECK(back.include_identity_init == config.include_identity_init);
    CHECK(back.seed == config.seed);
    CHECK(back.line_search == config.line_search);

    CHECK_THROWS_AS(ascent_config_from_json("{\"line_search\": \"banana\"}"), ParseError);
    CHECK_THROWS_AS(ascent_config_from_json("{"), ParseError);
}
