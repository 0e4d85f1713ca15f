#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "shocklayer/ode.hpp"
#include "shocklayer/types.hpp"

using namespace shocklayer;

namespace {

OdeRhs decay = [](double, const Vec& y) { return Vec(-y); };

OdeRhs harmonic = [](double, const Vec& y) {
    Vec f(2);
    f[0] = y[1];
    f[1] = -y[0];
    return f;
};

}  // namespace

TEST_CASE("exponential decay to tight tolerance") {
    Vec y0(1);
    y0[0] = 1.0;
    OdeOptions opts;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;
    const OdeSolution sol = integrate(decay, 0.0, y0, 5.0, opts);
    CHECK(sol.status == OdeStatus::reached_end);
    CHECK(sol.y_end[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-11));
}

TEST_CASE("harmonic oscillator keeps the invariant") {
    Vec y0(2);
    y0 << 1.0, 0.0;
    OdeOptions opts;
    opts.rtol = 1e-11;
    opts.atol = 1e-13;
    const OdeSolution sol = integrate(harmonic, 0.0, y0, 20.0, opts);
    CHECK(sol.status == OdeStatus::reached_end);
    CHECK(sol.y_end[0] == doctest::Approx(std::cos(20.0)).epsilon(1e-9));
    CHECK(sol.y_end.squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fifth-order error scaling under tolerance tightening") {
    Vec y0(2);
    y0 << 1.0, 0.0;
    double err_loose, err_tight;
    {
        OdeOptions o;
        o.rtol = 1e-6;
        o.atol = 1e-9;
        err_loose = std::abs(integrate(harmonic, 0.0, y0, 10.0, o).y_end[0] - std::cos(10.0));
    }
    {
        OdeOptions o;
        o.rtol = 1e-10;
        o.atol = 1e-13;
        err_tight = std::abs(integrate(harmonic, 0.0, y0, 10.0, o).y_end[0] - std::cos(10.0));
    }
    CHECK(err_tight < err_loose);
    CHECK(err_tight <= 1e-8);
}

TEST_CASE("dense output tracks the solution between steps") {
    Vec y0(2);
    y0 << 1.0, 0.0;
    OdeOptions opts;
    opts.rtol = 1e-10;
    opts.atol = 1e-12;
    const OdeSolution sol = integrate(harmonic, 0.0, y0, 12.0, opts);
    REQUIRE(sol.status == OdeStatus::reached_end);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> xs(0.0, 12.0);
    for (int i = 0; i < 400; ++i) {
        const double x = xs(rng);
        const Vec y = sol.eval(x);
        CHECK(y[0] == doctest::Approx(std::cos(x)).epsilon(5e-9));
        CHECK(y[1] == doctest::Approx(-std::sin(x)).epsilon(5e-9));
    }
    // endpoints reproduced exactly by the interpolant
    CHECK(sol.eval(0.0)[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sol.eval(12.0)[0] == doctest::Approx(sol.y_end[0]).epsilon(1e-14));
}

TEST_CASE("event location by bisection") {
    Vec y0(2);
    y0 << 1.0, 0.0;
    OdeOptions opts;
    opts.rtol = 1e-11;
    opts.atol = 1e-13;
    // stop when the first component crosses zero: x = pi/2
    OdeEvent ev = [](double, const Vec& y) { return y[0]; };
    const OdeSolution sol = integrate(harmonic, 0.0, y0, 10.0, opts, ev);
    CHECK(sol.status == OdeStatus::event);
    CHECK(sol.x_end == doctest::Approx(M_PI / 2).epsilon(1e-9));
    CHECK(std::abs(sol.y_end[0]) <= 1e-9);
}

TEST_CASE("blow-up reports the last valid state") {
    // y' = y^2 blows up at x = 1 from y(0) = 1
    OdeRhs riccati = [](double, const Vec& y) { return Vec(y.array().square().matrix()); };
    Vec y0(1);
    y0[0] = 1.0;
    OdeOptions opts;
    opts.blow_limit = 1e6;
    const OdeSolution sol = integrate(riccati, 0.0, y0, 2.0, opts);
    CHECK(sol.status == OdeStatus::blow_up);
    CHECK(sol.x_end > 0.9);
    CHECK(sol.x_end < 1.01);
    CHECK(sol.y_end.allFinite());
}

TEST_CASE("domain exit counts as blow-up") {
    OdeRhs guarded = [](double, const Vec& y) {
        if (y[0] <= 0.5) throw DomainError("left the admissible cone");
        Vec f(1);
        f[0] = -1.0;
        return f;
    };
    Vec y0(1);
    y0[0] = 1.0;
    const OdeSolution sol = integrate(guarded, 0.0, y0, 2.0, OdeOptions{});
    CHECK(sol.status == OdeStatus::blow_up);
    CHECK(sol.y_end[0] >= 0.5);
    CHECK(sol.x_end <= 0.51);
}

TEST_CASE("guard-based stop preserves admissibility") {
    Vec y0(1);
    y0[0] = 1.0;
    OdeGuard guard = [](const Vec& y) { return y[0] > 0.3; };
    OdeRhs lin = [](double, const Vec& y) { return Vec(-y); };
    const OdeSolution sol = integrate(lin, 0.0, y0, 10.0, OdeOptions{}, nullptr, guard);
    CHECK(sol.status == OdeStatus::blow_up);
    CHECK(sol.y_end[0] >= 0.3);
}

TEST_CASE("deterministic repeated runs") {
    Vec y0(2);
    y0 << 0.3, -0.7;
    OdeOptions opts;
    const OdeSolution a = integrate(harmonic, 0.0, y0, 7.0, opts);
    const OdeSolution b = integrate(harmonic, 0.0, y0, 7.0, opts);
    REQUIRE(a.steps.size() == b.steps.size());
    CHECK(std::memcmp(a.y_end.data(), b.y_end.data(), sizeof(double) * 2) == 0);
    for (std::size_t i = 0; i < a.steps.size(); ++i) CHECK(a.steps[i].x0 == b.steps[i].x0);
}
