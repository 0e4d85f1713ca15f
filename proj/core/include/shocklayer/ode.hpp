#ifndef SHOCKLAYER_ODE_HPP
#define SHOCKLAYER_ODE_HPP

// Adaptive Dormand-Prince 5(4) integrator with per-component error control,
// continuous (dense) output and event location by bisection on the interpolant.

#include <functional>
#include <vector>

#include "shocklayer/types.hpp"

namespace shocklayer {

using OdeRhs = std::function<Vec(double x, const Vec& y)>;
// Integration stops at the first zero crossing from positive to nonpositive.
using OdeEvent = std::function<double(double x, const Vec& y)>;
using OdeGuard = std::function<bool(const Vec& y)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;        // 0: automatic
    double h_max = 0.0;         // 0: span
    long max_steps = 4000000;
    double blow_limit = 1e12;   // |y|_inf beyond this counts as blow-up
    bool store_steps = true;    // keep dense-output data
};

enum class OdeStatus {
    reached_end,     // integrated to x_end
    event,           // event function crossed zero
    blow_up,         // state left the admissible region or became non-finite
    step_underflow,  // error control drove h below machine resolution (stiffness)
    max_steps,       // step budget exhausted
};

const char* to_string(OdeStatus s);

// One accepted step with the quartic interpolant coefficients.
struct DenseStep {
    double x0 = 0.0;
    double h = 0.0;
    Vec r1, r2, r3, r4, r5;

    Vec eval(double x) const;
};

struct OdeSolution {
    OdeStatus status = OdeStatus::reached_end;
    double x_begin = 0.0;
    double x_end = 0.0;
    Vec y_end;
    std::vector<DenseStep> steps;
    long n_accepted = 0;
    long n_rejected = 0;
    long n_rhs = 0;

    // dense evaluation anywhere in [x_begin, x_end]
    Vec eval(double x) const;
};

OdeSolution integrate(const OdeRhs& rhs, double x0, const Vec& y0, double x_end,
                      const OdeOptions& opts = {}, const OdeEvent& event = nullptr,
                      const OdeGuard& guard = nullptr);

}  // namespace shocklayer

#endif
