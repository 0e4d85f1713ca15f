#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "shocklayer/twofluid.hpp"

using namespace shocklayer;

TEST_CASE("density partition") {
    SUBCASE("symmetric species") {
        auto [r1, r2] = partition_density(2.0, {1.0, -1.0});
        CHECK(r1 == doctest::Approx(1.0));
        CHECK(r2 == doctest::Approx(1.0));
    }
    SUBCASE("light species carries a tiny fraction") {
        auto [r1, r2] = partition_density(1.0, {1836.0, -1.0});
        CHECK(r1 == doctest::Approx(1.0 / 1837.0));
        CHECK(r2 == doctest::Approx(1836.0 / 1837.0));
    }
    SUBCASE("zero density") {
        auto [r1, r2] = partition_density(0.0, {2.0, -1.0});
        CHECK(r1 == 0.0);
        CHECK(r2 == 0.0);
    }
    SUBCASE("degenerate species rejected") {
        CHECK_THROWS_AS(partition_density(1.0, {1.0, 1.0}), ConfigError);
    }
    SUBCASE("partition sums to the input") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> g(-2000.0, 2000.0), rr(0.0, 10.0);
        for (int i = 0; i < 500; ++i) {
            const double g1 = g(rng);
            double g2 = g(rng);
            if (g1 == g2) g2 += 1.0;
            const double rho = rr(rng);
            auto [r1, r2] = partition_density(rho, {g1, g2});
            CHECK(r1 + r2 == doctest::Approx(rho).epsilon(1e-12));
        }
    }
}

TEST_CASE("diffusion velocities") {
    SUBCASE("no current, no diffusion") {
        auto [w1, w2] = diffusion_velocities(Vec3::Zero(), 1.0, {1.0, -1.0});
        CHECK(w1.norm() == 0.0);
        CHECK(w2.norm() == 0.0);
    }
    SUBCASE("unit case") {
        auto [w1, w2] = diffusion_velocities(Vec3(0, 1, 0), 1.0, {1.0, -1.0});
        CHECK(w1.isApprox(Vec3(0, 1, 0), 1e-14));
        CHECK(w2.isApprox(Vec3(0, -1, 0), 1e-14));
    }
    SUBCASE("scaled case") {
        auto [w1, w2] = diffusion_velocities(Vec3(0, 2, 0), 2.0, {2.0, -1.0});
        CHECK(w1.isApprox(Vec3(0, 1, 0), 1e-14));
        CHECK(w2.isApprox(Vec3(0, -0.5, 0), 1e-14));
    }
    SUBCASE("nonpositive density rejected") {
        CHECK_THROWS_AS(diffusion_velocities(Vec3(0, 1, 0), 0.0, {1.0, -1.0}), DomainError);
    }
    SUBCASE("gamma-weighted equality of the pair") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> g(0.2, 50.0), comp(-2.0, 2.0);
        for (int i = 0; i < 300; ++i) {
            const double g1 = g(rng), g2 = -g(rng);
            const Vec3 cur(comp(rng), comp(rng), comp(rng));
            auto [w1, w2] = diffusion_velocities(cur, 1.5, {g1, g2});
            CHECK((g2 * w1 - g1 * w2).norm() <=
                  1e-12 * std::max(1.0, (g2 * w1).norm()));
        }
    }
}

TEST_CASE("transport coefficients") {
    SpeciesSpec sp;
    sp.m_e = 1.0;
    sp.m_i = 1.0 + 1e-12;  // nearly symmetric masses keep the examples simple
    sp.e_charge = 1.0;
    sp.f1 = 1.0;

    SUBCASE("all-ones substitution") {
        const double rho = (sp.m_e + sp.m_i) * 1.0;  // nu = 1
        const auto tc = transport_coefficients(sp, rho, 1.0, 1.0);
        CHECK(tc.sigma == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(tc.alpha12 == doctest::Approx(-1.0));
    }
    SUBCASE("sigma matches e^2 nu/(m_e f) over a range") {
        SpeciesSpec s2;
        s2.m_e = 0.25;
        s2.m_i = 2.0;
        s2.e_charge = 2.0;
        s2.f1 = 4.0;
        for (double nu : {0.5, 1.0, 3.0}) {
            const double rho = (s2.m_e + s2.m_i) * nu;
            const auto tc = transport_coefficients(s2, rho, nu, 1.0);
            CHECK(tc.sigma ==
                  doctest::Approx(s2.e_charge * s2.e_charge * nu / (s2.m_e * s2.f1))
                      .epsilon(1e-12));
        }
        // (e=2, m_e=1, nu=3, f1=4) -> sigma = 3
        SpeciesSpec s3;
        s3.m_e = 1.0;
        s3.m_i = 1836.0;
        s3.e_charge = 2.0;
        s3.f1 = 4.0;
        const double rho3 = (s3.m_e + s3.m_i) * 3.0;
        CHECK(transport_coefficients(s3, rho3, 3.0, 1.0).sigma == doctest::Approx(3.0));
    }
    SUBCASE("collisions proportional to density give a constant sigma") {
        SpeciesSpec s2;
        s2.m_e = 1.0;
        s2.m_i = 1836.0;
        s2.e_charge = 1.0;
        s2.collision = CollisionModel::proportional_to_density;
        s2.c1 = 1.0;
        double first = 0.0;
        for (double nu : {0.1, 1.0, 10.0, 100.0}) {
            const double rho = (s2.m_e + s2.m_i) * nu;
            const double sigma = transport_coefficients(s2, rho, nu, 1.0).sigma;
            if (first == 0.0) first = sigma;
            CHECK(sigma == doctest::Approx(first).epsilon(1e-12));
            CHECK(sigma == doctest::Approx(s2.e_charge * s2.e_charge / (s2.m_e * s2.c1)));
        }
    }
    SUBCASE("hall coefficient matches the singly ionized closed form") {
        SpeciesSpec s2;
        s2.m_e = 0.01;
        s2.m_i = 1.0;
        s2.e_charge = 1.5;
        s2.f1 = 2.0;
        const double nu = 0.7;
        const double rho = (s2.m_e + s2.m_i) * nu;
        const auto tc = transport_coefficients(s2, rho, nu, 1.0);
        const double expected =
            s2.e_charge * (s2.m_e - s2.m_i) / ((s2.m_e + s2.m_i) * s2.m_e * s2.f1);
        CHECK(tc.hall == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("sigma stays positive, beta matches the inertia constant") {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> mass(0.001, 0.5), nu_d(0.1, 5.0), f_d(0.1, 9.0);
        for (int i = 0; i < 200; ++i) {
            SpeciesSpec s2;
            s2.m_e = mass(rng);
            s2.m_i = 1.0;
            s2.e_charge = 1.0;
            s2.f1 = f_d(rng);
            const double nu = nu_d(rng);
            const double rho = (s2.m_e + s2.m_i) * nu;
            const double M = 2.0;
            const auto tc = transport_coefficients(s2, rho, nu, M);
            CHECK(tc.sigma > 0.0);
            CHECK(tc.beta == doctest::Approx(s2.m_e * s2.m_i /
                                             (s2.e_charge * s2.e_charge * M)));
        }
    }
    SUBCASE("bad inputs rejected") {
        CHECK_THROWS_AS(transport_coefficients(sp, 1.0, 0.0, 1.0), DomainError);
    }
}

TEST_CASE("charge partition sums to zero exactly") {
    ModelParams p;
    p.M = 2.0;
    p.gamma_e = -1836.0;
    p.gamma_i = 1.0;
    SpeciesSpec sp;
    PlasmaState st;
    st.u = 1.7;
    st.T = 0.9;
    st.zeta2 = 0.3;
    st.zeta3 = -0.2;
    const SpeciesView view = species_view(st, p, sp);
    CHECK(view.rho_ee + view.rho_ei == 0.0);  // exact by construction
    CHECK(view.rho_e + view.rho_i == doctest::Approx(density(st, p)).epsilon(1e-14));
    const double scale = std::max(1.0, (view.rho_e * view.w_e).norm());
    CHECK((view.rho_e * view.w_e + view.rho_i * view.w_i).norm() <= 1e-12 * scale);
}

TEST_CASE("ohm residual") {
    SUBCASE("quiescent plasma") {
        ModelParams p;
        p.sigma = 2.0;
        PlasmaState st;
        st.u = 1.0;
        st.T = 1.0;
        CHECK(ohm_residual(st, p).norm() == doctest::Approx(0.0));
    }
    SUBCASE("current constructed from the Hall-free law vanishes") {
        ModelParams p;
        p.sigma = 2.0;
        p.chi = 0.0;
        p.B1 = 0.4;
        p.E1 = 0.0;
        p.E2 = 0.3;
        p.E3 = -0.2;
        PlasmaState st;
        st.u = 1.1;
        st.v = 0.2;
        st.w = -0.1;
        st.B2 = 0.5;
        st.B3 = 0.25;
        st.T = 1.0;
        const Vec3 E(p.E1, p.E2, p.E3);
        const Vec3 u(st.u, st.v, st.w);
        const Vec3 B(p.B1, st.B2, st.B3);
        const Vec3 i = p.sigma * (E + u.cross(B));
        // zeta2 = u mu_e J3, zeta3 = -u mu_e J2; the x-component of sigma(E+uxB)
        // is not representable by the in-plane current and stays as residual
        st.zeta2 = st.u * p.mu_e * i[2];
        st.zeta3 = -st.u * p.mu_e * i[1];
        const Vec3 r = ohm_residual(st, p);
        CHECK(std::abs(r[1]) <= 1e-14 * std::max(1.0, i.norm()));
        CHECK(std::abs(r[2]) <= 1e-14 * std::max(1.0, i.norm()));
    }
    SUBCASE("matches an independently coded evaluator on random states") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (int k = 0; k < 200; ++k) {
            ModelParams p;
            p.sigma = 0.5 + std::abs(d(rng));
            p.chi = d(rng);
            p.B1 = d(rng);
            p.E1 = d(rng);
            p.E2 = d(rng);
            p.E3 = d(rng);
            PlasmaState st;
            st.u = 1.0 + 0.5 * std::abs(d(rng));
            st.v = d(rng);
            st.w = d(rng);
            st.B2 = d(rng);
            st.B3 = d(rng);
            st.zeta2 = d(rng);
            st.zeta3 = d(rng);
            st.T = 1.0;

            // straight-line componentwise arithmetic
            const double J2 = -st.zeta3 / (st.u * p.mu_e);
            const double J3 = st.zeta2 / (st.u * p.mu_e);
            const double uxB1 = st.v * st.B3 - st.w * st.B2;
            const double uxB2 = st.w * p.B1 - st.u * st.B3;
            const double uxB3 = st.u * st.B2 - st.v * p.B1;
            const double ixB1 = J2 * st.B3 - J3 * st.B2;
            const double ixB2 = J3 * p.B1;
            const double ixB3 = -J2 * p.B1;
            const double r1 = 0.0 - p.sigma * (p.E1 + uxB1) + p.chi * ixB1;
            const double r2 = J2 - p.sigma * (p.E2 + uxB2) + p.chi * ixB2;
            const double r3 = J3 - p.sigma * (p.E3 + uxB3) + p.chi * ixB3;

            const Vec3 r = ohm_residual(st, p);
            CHECK(r[0] == doctest::Approx(r1).epsilon(1e-14));
            CHECK(r[1] == doctest::Approx(r2).epsilon(1e-14));
            CHECK(r[2] == doctest::Approx(r3).epsilon(1e-14));
        }
    }
}

TEST_CASE("joule identity") {
    SUBCASE("zero current") {
        auto [lhs, rhs] = joule_identity_check(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                               Vec3::Zero(), 1.0);
        CHECK(lhs == 0.0);
        CHECK(rhs == 0.0);
    }
    SUBCASE("unit field case") {
        const Vec3 E(1, 0, 0);
        const Vec3 i = 2.0 * E;
        auto [lhs, rhs] = joule_identity_check(i, E, Vec3::Zero(), Vec3::Zero(), 2.0);
        CHECK(lhs == doctest::Approx(2.0));
        CHECK(rhs == doctest::Approx(2.0));
    }
    SUBCASE("random samples satisfy the identity") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> d(-1.0, 1.0), sig(0.1, 10.0);
        for (int k = 0; k < 1000; ++k) {
            const Vec3 E(d(rng), d(rng), d(rng));
            const Vec3 u(d(rng), d(rng), d(rng));
            const Vec3 B(d(rng), d(rng), d(rng));
            const double sigma = sig(rng);
            const Vec3 i = sigma * (E + u.cross(B));
            auto [lhs, rhs] = joule_identity_check(i, E, u, B, sigma);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1.0));
        }
    }
}

namespace {

// fixed-step RK4 of the relaxation law at 10x resolution, independent coding
std::vector<double> relaxation_oracle(const std::vector<double>& x, const std::vector<double>& u,
                                      const std::vector<double>& T, double m_e, double m_i,
                                      double f) {
    std::vector<double> Te(x.size());
    Te[0] = T[0];
    double val = T[0];
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = (x[i + 1] - x[i]) / 10.0;
        for (int k = 0; k < 10; ++k) {
            auto rhs = [&](double frac, double te) {
                const double t = (k + frac) / 10.0;
                const double uu = u[i] + t * (u[i + 1] - u[i]);
                const double tm = T[i] + t * (T[i + 1] - T[i]);
                return (2.0 * m_e * f / (m_i * uu)) * ((2.0 * tm - te) - te);
            };
            const double k1 = rhs(0.0, val);
            const double k2 = rhs(0.5, val + 0.5 * h * k1);
            const double k3 = rhs(0.5, val + 0.5 * h * k2);
            const double k4 = rhs(1.0, val + h * k3);
            val += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        Te[i + 1] = val;
    }
    return Te;
}

}  // namespace

TEST_CASE("temperature split") {
    SpeciesSpec sp;
    sp.m_e = 0.01;
    sp.m_i = 1.0;
    sp.f1 = 2.0;

    SUBCASE("constant T stays in equilibrium") {
        std::vector<double> x, u, T;
        for (int i = 0; i < 200; ++i) {
            x.push_back(0.05 * i);
            u.push_back(1.5);
            T.push_back(0.8);
        }
        const auto split = temperature_split(x, u, T, sp);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(split.T_e[i] == doctest::Approx(0.8).epsilon(1e-14));
            CHECK(split.T_i[i] == doctest::Approx(0.8).epsilon(1e-14));
        }
    }

    // a smooth step in T with settled inflow
    auto make_step = [](std::vector<double>& x, std::vector<double>& u, std::vector<double>& T) {
        const int n = 1200;
        for (int i = 0; i < n; ++i) {
            const double xi = -12.0 + 24.0 * i / (n - 1);
            x.push_back(xi);
            const double s = std::tanh(xi);
            u.push_back(1.5 - 0.4 * s);
            T.push_back(0.8 + 0.5 * (1.0 + s) / 2.0);
        }
    };

    SUBCASE("fast relaxation pins T_e to T") {
        std::vector<double> x, u, T;
        make_step(x, u, T);
        SpeciesSpec fast = sp;
        fast.f1 = 2e4;
        const auto split = temperature_split(x, u, T, fast);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(std::abs(split.T_e[i] - T[i]) <= 1e-3 * T[i]);
    }

    SUBCASE("mean identity holds pointwise and the 10x oracle agrees") {
        std::vector<double> x, u, T;
        make_step(x, u, T);
        const auto split = temperature_split(x, u, T, sp);
        const auto oracle = relaxation_oracle(x, u, T, sp.m_e, sp.m_i, sp.f1);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(std::abs(0.5 * (split.T_e[i] + split.T_i[i]) - T[i]) <= 1e-12 * T[i]);
            CHECK(std::abs(split.T_e[i] - oracle[i]) <= 1e-6 * std::max(1.0, oracle[i]));
        }
        // the electron temperature lags through the layer
        bool lags = false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (split.T_e[i] < T[i] - 1e-3) lags = true;
        CHECK(lags);
    }

    SUBCASE("unsettled upstream is rejected") {
        std::vector<double> x, u, T;
        for (int i = 0; i < 100; ++i) {
            x.push_back(0.1 * i);
            u.push_back(1.0);
            T.push_back(1.0 + 0.1 * i);  // ramp straight from the first sample
        }
        CHECK_THROWS_AS(temperature_split(x, u, T, sp), NumericError);
    }
}
