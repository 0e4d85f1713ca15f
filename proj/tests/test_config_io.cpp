#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "shocklayer/config.hpp"
#include "shocklayer/io.hpp"

using namespace shocklayer;

namespace {

const char* kGood = R"({
  "model": "plasma",
  "upstream": { "rho": 1.0, "u": 2.0, "T": 0.6, "B1": 0.5, "B2": 0.1 },
  "species": { "m_e": 0.000544617, "m_i": 1.0, "e": 1.0, "collision": "constant", "f": 2.0 },
  "dissipation": { "eta": 1.0, "mu_visc": 1.0, "kappa": 1.0, "beta": 1.0, "sigma": 1.0, "chi": 0.0 },
  "eos": { "kind": "ideal-gas", "R_gas": 1.0, "gamma": 1.6666666666666667 },
  "solver": { "rtol": 1e-10 },
  "outputs": { "samples": 2001 }
})";

}  // namespace

TEST_CASE("well-formed configs parse") {
    const RunConfig cfg = parse_config_text(kGood);
    CHECK(cfg.upstream.u == 2.0);
    CHECK(cfg.upstream.B1 == 0.5);
    CHECK(cfg.outputs.samples == 2001);
    const ModelParams p = cfg.make_params();
    CHECK(p.M == doctest::Approx(2.0));
    CHECK(p.B1 == 0.5);
}

TEST_CASE("unknown keys are rejected with their path") {
    const std::string bad = R"({ "upstream": { "rho": 1.0, "u": 2.0, "T": 0.6, "speed": 3 } })";
    CHECK_THROWS_WITH_AS(parse_config_text(bad),
                         "config/upstream/speed: unknown key", ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({ "viscosity": 1.0 })"), ConfigError);
}

TEST_CASE("field-level validation errors") {
    CHECK_THROWS_AS(parse_config_text(R"({ "dissipation": { "kappa": -1.0 } })"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({ "upstream": { "rho": -2.0 } })"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({ "eos": { "kind": "user-tabulated" } })"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({ "eos": { "gamma": 0.9 } })"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("not json at all"), ConfigError);
}

TEST_CASE("derived coefficients agree with both formula routes") {
    const std::string derived = R"({
      "upstream": { "rho": 1.0, "u": 2.0, "T": 0.6 },
      "species": { "m_e": 0.000544617, "m_i": 1.0, "e": 1.0, "collision": "constant", "f": 2.0 },
      "dissipation": { "eta": 1.0, "mu_visc": 1.0, "kappa": 1.0,
                        "beta": "derived", "sigma": "derived", "chi": "derived" }
    })";
    const RunConfig cfg = parse_config_text(derived);
    const ModelParams p = cfg.make_params();  // throws if the routes disagree
    CHECK(p.beta > 0.0);
    CHECK(p.sigma > 0.0);
    // beta = m_e m_i / (e^2 M)
    CHECK(p.beta == doctest::Approx(0.000544617 * 1.0 / (1.0 * 2.0)).epsilon(1e-12));
    // chi = (m_i - m_e)/(e M)
    CHECK(p.chi == doctest::Approx((1.0 - 0.000544617) / 2.0).epsilon(1e-12));
}

TEST_CASE("overrides reach nested keys and keep integers integral") {
    Overrides ov = {{"solver.rtol", "1e-8"}, {"outputs.samples", "101"},
                    {"upstream.u", "1.5"}};
    const RunConfig cfg = parse_config_text(kGood, ov);
    CHECK(cfg.solver.rtol == doctest::Approx(1e-8));
    CHECK(cfg.outputs.samples == 101);
    CHECK(cfg.upstream.u == 1.5);
}

TEST_CASE("17-digit formatting round-trips doubles") {
    for (double v : {1.0 / 3.0, 0.1, 2.0, 1e-300, 6.02214076e23, -0.0, 3.333333333333333e-7}) {
        const std::string s = format_g17(v);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == v);
    }
}

TEST_CASE("tables round-trip exactly") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "shocklayer_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "table.csv").string();

    Table t;
    t.header = {"x", "u", "T"};
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int i = 0; i < 200; ++i)
        t.rows.push_back({d(rng), d(rng) * 1e-15, d(rng) * 1e12});
    write_table(path, t);

    const Table back = read_table(path);
    REQUIRE(back.header == t.header);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (std::size_t j = 0; j < t.rows[i].size(); ++j)
            CHECK(back.rows[i][j] == t.rows[i][j]);
    fs::remove_all(dir);
}
