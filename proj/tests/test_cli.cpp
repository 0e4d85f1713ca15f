#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "shocklayer/io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBinary = SHOCKPROF_PATH;
const std::string kConfigs = CONFIGS_DIR;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "shockprof_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = kBinary + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("restpoints subcommand") {
    const fs::path dir = scratch_dir();
    SUBCASE("two roots at Mach 2") {
        const int rc = run("restpoints --config " + kConfigs + "/mach2_gas.json --out " +
                           (dir / "rp2").string());
        CHECK(rc == 0);
        const shocklayer::Table t = shocklayer::read_table((dir / "rp2/restpoints.csv").string());
        CHECK(t.rows.size() == 2);
    }
    SUBCASE("sonic upstream leaves only one root") {
        const fs::path cfg = dir / "mach1.json";
        write(cfg, R"({ "upstream": { "rho": 1.0, "u": 1.0, "T": 0.6 } })");
        const int rc = run("restpoints --config " + cfg.string() + " --out " +
                           (dir / "rp1").string());
        CHECK(rc == 3);
    }
    SUBCASE("invalid config exits with the validation code") {
        const fs::path cfg = dir / "bad.json";
        write(cfg, R"({ "dissipation": { "kappa": -1.0 } })");
        CHECK(run("restpoints --config " + cfg.string() + " --out " + (dir / "rpb").string()) ==
              1);
    }
    SUBCASE("unknown keys exit with the validation code") {
        const fs::path cfg = dir / "unknown.json";
        write(cfg, R"({ "upstram": { "u": 2.0 } })");
        CHECK(run("restpoints --config " + cfg.string() + " --out " + (dir / "rpu").string()) ==
              1);
    }
}

TEST_CASE("profile subcommand") {
    const fs::path dir = scratch_dir();
    SUBCASE("gas-dynamic Mach 2 passes end to end") {
        const int rc = run("profile --config " + kConfigs + "/mach2_gas.json --out " +
                           (dir / "pf").string());
        CHECK(rc == 0);
        const shocklayer::Table t = shocklayer::read_table((dir / "pf/profile.csv").string());
        CHECK(t.header.size() == 17);
        CHECK(t.header[0] == "x");
        CHECK(t.header[16] == "residual_worst");
        CHECK(t.rows.size() >= 1000);
    }
    SUBCASE("expansion configuration reports no connection") {
        // downstream state of the Mach-2 shock used as the inflow: subsonic,
        // no compressive orbit leaves it
        const fs::path cfg = dir / "expansion.json";
        write(cfg, R"({
          "upstream": { "rho": 2.2857142857142856, "u": 0.875, "T": 1.246875 },
          "solver": { "u_min": 0.5, "u_max": 2.5 }
        })");
        const int rc = run("profile --config " + cfg.string() + " --out " +
                           (dir / "pfe").string());
        CHECK(rc == 4);
    }
}

TEST_CASE("byte-identical reruns") {
    const fs::path dir = scratch_dir();
    const std::string a = (dir / "runA").string();
    const std::string b = (dir / "runB").string();
    REQUIRE(run("profile --config " + kConfigs + "/mach2_b05.json --out " + a) == 0);
    REQUIRE(run("profile --config " + kConfigs + "/mach2_b05.json --out " + b) == 0);
    CHECK(slurp(a + "/profile.csv") == slurp(b + "/profile.csv"));
    CHECK(slurp(a + "/profile_summary.json") == slurp(b + "/profile_summary.json"));
}

TEST_CASE("profile table re-ingests exactly") {
    const fs::path dir = scratch_dir();
    const std::string out = (dir / "reread").string();
    REQUIRE(run("profile --config " + kConfigs + "/mach2_gas.json --out " + out) == 0);
    const std::string path = out + "/profile.csv";
    const shocklayer::Table t = shocklayer::read_table(path);
    // writing the parsed values back reproduces the file byte for byte
    const std::string copy = out + "/profile_copy.csv";
    shocklayer::write_table(copy, t);
    CHECK(slurp(path) == slurp(copy));
}

TEST_CASE("sweep subcommand on the Burgers embedding") {
    const fs::path dir = scratch_dir();
    const fs::path cfg = dir / "burgers.json";
    write(cfg, R"({
      "model": "burgers",
      "burgers": { "u_left": 1.0, "u_right": 0.0, "viscosity": 0.1 },
      "sweep": { "multipliers": [1.0, 0.5, 0.25, 0.125] }
    })");
    const int rc = run("sweep --config " + cfg.string() + " --out " + (dir / "sw").string());
    CHECK(rc == 0);
    const shocklayer::Table t = shocklayer::read_table((dir / "sw/sweep.csv").string());
    REQUIRE(t.rows.size() == 4);
    const double w1 = t.rows[0][2];
    CHECK(t.rows[1][2] / w1 == doctest::Approx(0.5).epsilon(0.1));
    CHECK(t.rows[2][2] / w1 == doctest::Approx(0.25).epsilon(0.1));
    CHECK(t.rows[3][2] / w1 == doctest::Approx(0.125).epsilon(0.1));
}

TEST_CASE("tolerance overrides flow into the run") {
    const fs::path dir = scratch_dir();
    const std::string out = (dir / "ov").string();
    const int rc = run("profile --config " + kConfigs +
                       "/mach2_gas.json --tol-override outputs.samples=6001 --out " + out);
    CHECK(rc == 0);
    const shocklayer::Table t = shocklayer::read_table(out + "/profile.csv");
    CHECK(t.rows.size() == 6001);
}
