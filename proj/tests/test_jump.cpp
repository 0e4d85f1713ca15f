#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "shocklayer/jump.hpp"
#include "shocklayer/layer.hpp"

using namespace shocklayer;

namespace {

struct Mach2Gas {
    ModelParams params;
    EosSpec eos;
    PlasmaState upstream;
    FluxConstants constants;

    Mach2Gas() {
        upstream.u = 2.0;
        upstream.T = 0.6;
        params.M = 1.0 * upstream.u;  // rho = 1
        constants = constants_from_upstream(upstream, params, eos);
        params.P = constants.P;
        params.P2star = constants.P2star;
        params.P3star = constants.P3star;
        params.C = constants.C;
        params.E2 = constants.E2;
        params.E3 = constants.E3;
    }
};

// classical gas-dynamic jump ratios, coded from the closed forms
struct RankineHugoniotOracle {
    double density_ratio;
    double pressure_ratio;
    RankineHugoniotOracle(double mach, double gamma) {
        density_ratio = (gamma + 1.0) * mach * mach / ((gamma - 1.0) * mach * mach + 2.0);
        pressure_ratio = 1.0 + 2.0 * gamma * (mach * mach - 1.0) / (gamma + 1.0);
    }
};

}  // namespace

TEST_CASE("constants from a quiescent upstream") {
    SUBCASE("field-free momentum flux") {
        ModelParams p;
        p.M = 1.0;
        EosSpec eos;
        PlasmaState up;
        up.u = 1.0;
        up.T = 1.0;  // rho = 1, p = 1
        const FluxConstants c = constants_from_upstream(up, p, eos);
        CHECK(c.M == doctest::Approx(1.0));
        CHECK(c.P == doctest::Approx(2.0));
        CHECK(c.P2star == doctest::Approx(0.0));
        CHECK(c.P3star == doctest::Approx(0.0));
        CHECK(c.E2 == doctest::Approx(0.0));
        CHECK(c.E3 == doctest::Approx(0.0));
        // energy constant: M (U_m + u^2/2) + p u = 1.5 + 0.5 + 1
        CHECK(c.C == doctest::Approx(3.0));
    }
    SUBCASE("magnetized upstream fixes the electric constants") {
        ModelParams p;
        p.M = 1.0;
        p.B1 = 1.0;
        EosSpec eos;
        PlasmaState up;
        up.u = 1.0;
        up.B2 = 0.5;
        up.T = 1.0;
        const FluxConstants c = constants_from_upstream(up, p, eos);
        CHECK(c.E3 == doctest::Approx(-0.5));
        CHECK(c.E2 == doctest::Approx(0.0));
        CHECK(c.P == doctest::Approx(1.0 + 1.0 + 0.125));
    }
    SUBCASE("nonzero current is rejected") {
        ModelParams p;
        EosSpec eos;
        PlasmaState up;
        up.u = 1.0;
        up.T = 1.0;
        up.zeta2 = 1e-3;
        CHECK_THROWS_AS(constants_from_upstream(up, p, eos), ConfigError);
    }
}

TEST_CASE("gas-dynamic Mach-2 jump matches the closed-form ratios") {
    const Mach2Gas m;
    const RestPointReport report = find_rest_points(m.constants, m.params, m.eos, [&] {
        RestPointSearch s;
        s.extra_seeds.push_back(m.upstream);
        return s;
    }());
    REQUIRE(report.roots.size() == 2);

    const RankineHugoniotOracle oracle(2.0, m.eos.gamma_adiabatic);
    const RestPoint& down = report.roots.front();  // sorted by u: downstream first
    const RestPoint& up = report.roots.back();
    CHECK(up.state.u == doctest::Approx(2.0).epsilon(1e-10));

    const double rho_ratio = (m.params.M / down.state.u) / (m.params.M / up.state.u);
    const double p_up = gas_pressure(m.params.M / up.state.u, up.state.T, m.eos);
    const double p_down = gas_pressure(m.params.M / down.state.u, down.state.T, m.eos);
    CHECK(rho_ratio == doctest::Approx(oracle.density_ratio).epsilon(1e-8));
    CHECK(p_down / p_up == doctest::Approx(oracle.pressure_ratio).epsilon(1e-8));
    CHECK(rho_ratio == doctest::Approx(16.0 / 7.0).epsilon(1e-8));
    CHECK(p_down / p_up == doctest::Approx(4.75).epsilon(1e-8));

    SUBCASE("downstream roots reproduce the same constants") {
        ModelParams p2 = m.params;
        p2.M = m.params.M;  // same flux by construction
        const FluxConstants c2 = constants_from_upstream(down.state, p2, m.eos);
        CHECK(c2.P == doctest::Approx(m.constants.P).epsilon(1e-8));
        CHECK(c2.C == doctest::Approx(m.constants.C).epsilon(1e-8));
        CHECK(c2.E2 == doctest::Approx(m.constants.E2).epsilon(1e-8));
        CHECK(c2.E3 == doctest::Approx(m.constants.E3).epsilon(1e-8));
        CHECK(std::abs(c2.P2star - m.constants.P2star) <= 1e-8);
        CHECK(std::abs(c2.P3star - m.constants.P3star) <= 1e-8);
    }

    SUBCASE("rest points carry no current and satisfy the tolerance") {
        for (const auto& r : report.roots) {
            CHECK(r.state.zeta2 == 0.0);
            CHECK(r.state.zeta3 == 0.0);
            CHECK(r.residual_norm <= 1e-10);
            CHECK(r.n_unstable + r.n_stable + r.n_center == 8);
        }
    }
}

TEST_CASE("sonic upstream degenerates to a single root") {
    ModelParams p;
    EosSpec eos;
    PlasmaState up;
    up.u = 1.0;  // a = sqrt(gamma R T) = 1 at T = 0.6
    up.T = 0.6;
    p.M = 1.0;
    const FluxConstants c = constants_from_upstream(up, p, eos);
    p.P = c.P;
    p.C = c.C;
    RestPointSearch s;
    s.extra_seeds.push_back(up);
    const RestPointReport report = find_rest_points(c, p, eos, s);
    CHECK(report.roots.size() == 1);
}

TEST_CASE("switch-on regime grows transverse field at the downstream root") {
    // low plasma-beta, slightly super-Alfvenic upstream with no transverse field
    ModelParams p;
    EosSpec eos;
    PlasmaState up;
    up.u = 2.2;
    up.T = 0.2;
    p.M = 2.2;  // rho = 1
    p.B1 = 2.0;
    const FluxConstants c = constants_from_upstream(up, p, eos);
    ModelParams filled = p;
    filled.P = c.P;
    filled.C = c.C;
    filled.E2 = c.E2;
    filled.E3 = c.E3;
    RestPointSearch s;
    s.extra_seeds.push_back(up);
    s.u_min = 0.05;
    s.u_max = 4.0;
    s.T_min = 0.05;
    s.T_max = 6.0;
    const RestPointReport report = find_rest_points(c, filled, eos, s);
    bool has_transverse_root = false;
    for (const auto& r : report.roots) {
        // every reported root must satisfy the algebraic system
        CHECK(rest_point_residual(r.state, filled, eos).cwiseAbs().maxCoeff() <= 1e-9);
        if (std::abs(r.state.B2) + std::abs(r.state.B3) > 1e-3) has_transverse_root = true;
    }
    CHECK(has_transverse_root);
}

TEST_CASE("classification marks the supersonic upstream unstable") {
    const Mach2Gas m;
    const RestPoint up = classify_rest_point(m.upstream, m.params, m.eos);
    CHECK(up.n_unstable >= 1);
    // independent scalar check: d(G_u)/du > 0 iff u^2 > R T (supersonic in the
    // isothermal sense), true for u = 2, T = 0.6
    CHECK(2.0 * 2.0 > m.eos.R_gas * 0.6);
}

TEST_CASE("zero-strength shock carries a center eigenvalue") {
    ModelParams p;
    EosSpec eos;
    PlasmaState up;
    up.u = 1.0;
    up.T = 0.6;  // sonic
    p.M = 1.0;
    const FluxConstants c = constants_from_upstream(up, p, eos);
    p.P = c.P;
    p.C = c.C;
    const RestPoint rp = classify_rest_point(up, p, eos);
    CHECK(rp.n_center >= 1);
}

TEST_CASE("seed permutation does not change the root set") {
    const Mach2Gas m;
    RestPointSearch a;
    a.extra_seeds.push_back(m.upstream);
    a.n_u = 17;
    a.n_T = 13;
    RestPointSearch b = a;
    b.n_u = 13;
    b.n_T = 17;
    b.u_min = 0.3;
    b.u_max = 3.7;
    const RestPointReport ra = find_rest_points(m.constants, m.params, m.eos, a);
    const RestPointReport rb = find_rest_points(m.constants, m.params, m.eos, b);
    REQUIRE(ra.roots.size() == rb.roots.size());
    for (std::size_t i = 0; i < ra.roots.size(); ++i) {
        CHECK(ra.roots[i].state.u == doctest::Approx(rb.roots[i].state.u).epsilon(1e-8));
        CHECK(ra.roots[i].state.T == doctest::Approx(rb.roots[i].state.T).epsilon(1e-8));
    }
}

TEST_CASE("threaded seed solves agree with the serial ones") {
    const Mach2Gas m;
    RestPointSearch a;
    a.extra_seeds.push_back(m.upstream);
    RestPointSearch b = a;
    b.threads = 4;
    const RestPointReport ra = find_rest_points(m.constants, m.params, m.eos, a);
    const RestPointReport rb = find_rest_points(m.constants, m.params, m.eos, b);
    REQUIRE(ra.roots.size() == rb.roots.size());
    for (std::size_t i = 0; i < ra.roots.size(); ++i)
        CHECK(ra.roots[i].state.u == rb.roots[i].state.u);
}

TEST_CASE("missing dissipation is rejected at classification") {
    const Mach2Gas m;
    ModelParams broken = m.params;
    broken.mu_visc = 0.0;
    CHECK_THROWS_AS(classify_rest_point(m.upstream, broken, m.eos), ConfigError);
}
