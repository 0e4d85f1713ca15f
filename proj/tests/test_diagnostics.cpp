#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shocklayer/diagnostics.hpp"
#include "shocklayer/pipeline.hpp"

using namespace shocklayer;

namespace {

struct GasSolved {
    ModelParams params;
    EosSpec eos;
    ShockSolution sol;

    GasSolved() {
        params.M = 2.0;
        PlasmaState up;
        up.u = 2.0;
        up.T = 0.6;
        sol = solve_shock_profile(params, eos, up, RestPointSearch{}, ProfileOptions{});
        REQUIRE(sol.profile.connected);
        params.P = sol.constants.P;
        params.P2star = sol.constants.P2star;
        params.P3star = sol.constants.P3star;
        params.C = sol.constants.C;
        params.E2 = sol.constants.E2;
        params.E3 = sol.constants.E3;
    }
    LayerSystem system() const { return LayerSystem(params, eos); }
};

}  // namespace

TEST_CASE("conservation residuals") {
    SUBCASE("constant profiles conserve exactly") {
        ModelParams p;
        p.M = 1.0;
        EosSpec eos;
        PlasmaState up;
        up.u = 1.0;
        up.T = 1.0;
        const FluxConstants c = constants_from_upstream(up, p, eos);
        const LayerSystem sys(p, eos, c);
        Profile prof;
        for (int i = 0; i < 100; ++i) {
            prof.x.push_back(0.1 * i);
            prof.samples.push_back(up.to_vector());
        }
        const ResidualReport rep = conservation_residuals(prof, sys);
        CHECK(rep.worst <= 1e-14);
        CHECK(rep.pass);
    }
    SUBCASE("accepted gas profile passes at the stated tolerance") {
        const GasSolved g;
        const ResidualReport rep = conservation_residuals(g.sol.profile.profile, g.system());
        CHECK(rep.pass);
        CHECK(rep.worst <= 1e-6);
        CHECK(rep.max_deviation[0] <= 1e-12);  // mass flux is algebraic
    }
    SUBCASE("a corrupted sample flips the flag") {
        const GasSolved g;
        Profile broken = g.sol.profile.profile;
        broken.samples[broken.samples.size() / 2][0] += 1e-3;
        const ResidualReport rep = conservation_residuals(broken, g.system());
        CHECK_FALSE(rep.pass);
    }
    SUBCASE("too few samples are rejected") {
        const GasSolved g;
        Profile tiny = g.sol.profile.profile;
        tiny.x.resize(10);
        tiny.samples.resize(10);
        CHECK_THROWS_AS(conservation_residuals(tiny, g.system()), ConfigError);
    }
}

TEST_CASE("electromagnetic divergence identities") {
    ModelParams p;  // mu_e = eps = 1
    SUBCASE("uniform fields are exact") {
        SyntheticFields f;
        const int n = 64;
        for (int j = 0; j < n; ++j) {
            f.x.push_back(static_cast<double>(j) / n);
            f.E.push_back(Vec3(0.3, -0.2, 0.1));
            f.B.push_back(Vec3(0.5, 0.4, -0.9));
            f.dE.push_back(Vec3::Zero());
            f.dB.push_back(Vec3::Zero());
        }
        const LorentzCheckResult r = lorentz_divergence_check(f, p);
        CHECK(r.max_error_momentum <= 1e-14);
        CHECK(r.max_error_poynting <= 1e-14);
    }
    SUBCASE("single-mode field converges at second order") {
        auto run = [&](int n) {
            SyntheticFields f;
            for (int j = 0; j < n; ++j) {
                const double x = static_cast<double>(j) / n;
                const double w = 2.0 * M_PI;
                f.x.push_back(x);
                f.E.push_back(Vec3::Zero());
                f.dE.push_back(Vec3::Zero());
                f.B.push_back(Vec3(0.0, std::sin(w * x), 0.0));
                f.dB.push_back(Vec3(0.0, w * std::cos(w * x), 0.0));
            }
            return lorentz_divergence_check(f, p).max_error_momentum;
        };
        const double e64 = run(64), e128 = run(128), e256 = run(256);
        CHECK(std::log2(e64 / e128) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(std::log2(e128 / e256) == doctest::Approx(2.0).epsilon(0.1));
    }
    SUBCASE("band-limited random fields show slope two on both identities") {
        std::vector<double> hs, em, ep;
        for (int n : {64, 128, 256}) {
            const SyntheticFields f = band_limited_fields(n, 4, 7);
            const LorentzCheckResult r = lorentz_divergence_check(f, p);
            hs.push_back(1.0 / n);
            em.push_back(r.max_error_momentum);
            ep.push_back(r.max_error_poynting);
        }
        auto slope = [&](const std::vector<double>& e) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < e.size(); ++i) {
                const double lx = std::log(hs[i]), ly = std::log(e[i]);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
            }
            const double n = static_cast<double>(e.size());
            return (n * sxy - sx * sy) / (n * sxx - sx * sx);
        };
        CHECK(slope(em) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(slope(ep) == doctest::Approx(2.0).epsilon(0.1));
    }
    SUBCASE("deterministic field synthesis") {
        const SyntheticFields a = band_limited_fields(128, 4, 7);
        const SyntheticFields b = band_limited_fields(128, 4, 7);
        for (int j = 0; j < 128; ++j) CHECK(a.B[j] == b.B[j]);
    }
}

TEST_CASE("frame-shift invariance of the profile") {
    ModelParams p;
    p.M = 2.0;
    EosSpec eos;
    PlasmaState up;
    up.u = 2.0;
    up.T = 0.6;
    const FluxConstants c = constants_from_upstream(up, p, eos);
    const LayerSystem sys(p, eos, c);
    GalileanCheckOptions opts;

    SUBCASE("zero shift is bitwise identical") {
        const GalileanCheckResult r = galilean_check(sys, up, Vec3::Zero(), opts);
        CHECK(r.max_discrepancy == 0.0);
    }
    SUBCASE("axial shift") {
        const GalileanCheckResult r = galilean_check(sys, up, Vec3(0.3, 0, 0), opts);
        CHECK(r.max_discrepancy <= 1e-6);
    }
    SUBCASE("transverse shift") {
        const GalileanCheckResult r = galilean_check(sys, up, Vec3(0, 0.3, 0), opts);
        CHECK(r.max_discrepancy <= 1e-6);
    }
    SUBCASE("axial shifts with radiation on are refused") {
        ModelParams prad = p;
        prad.a_R = 0.1;
        const FluxConstants crad = constants_from_upstream(up, prad, eos);
        const LayerSystem sys_rad(prad, eos, crad);
        CHECK_THROWS_AS(galilean_check(sys_rad, up, Vec3(0.3, 0, 0), opts), ConfigError);
    }
}
