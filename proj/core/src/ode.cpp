#include "shocklayer/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shocklayer {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// b5 - b4, for the embedded error estimate
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

bool all_finite(const Vec& y) { return y.allFinite(); }

}  // namespace

const char* to_string(OdeStatus s) {
    switch (s) {
        case OdeStatus::reached_end: return "reached-end";
        case OdeStatus::event: return "event";
        case OdeStatus::blow_up: return "blow-up";
        case OdeStatus::step_underflow: return "stiffness-failure";
        case OdeStatus::max_steps: return "max-steps";
    }
    return "unknown";
}

Vec DenseStep::eval(double x) const {
    const double theta = (x - x0) / h;
    const double theta1 = 1.0 - theta;
    return r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
}

Vec OdeSolution::eval(double x) const {
    if (steps.empty()) return y_end;
    // binary search for the covering step
    std::size_t lo = 0, hi = steps.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (steps[mid].x0 <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    const DenseStep& st = steps[lo];
    const double clamped = std::clamp(x, st.x0, st.x0 + st.h);
    return st.eval(clamped);
}

OdeSolution integrate(const OdeRhs& rhs, double x0, const Vec& y0, double x_end,
                      const OdeOptions& opts, const OdeEvent& event, const OdeGuard& guard) {
    const int n = static_cast<int>(y0.size());
    OdeSolution sol;
    sol.x_begin = x0;
    sol.x_end = x0;
    sol.y_end = y0;

    if (x_end <= x0) return sol;

    auto call_rhs = [&](double x, const Vec& y, Vec& dy) -> bool {
        try {
            dy = rhs(x, y);
            ++sol.n_rhs;
        } catch (const DomainError&) {
            return false;
        }
        return dy.allFinite();
    };

    auto ok_state = [&](const Vec& y) {
        if (!all_finite(y)) return false;
        if (y.cwiseAbs().maxCoeff() > opts.blow_limit) return false;
        if (guard && !guard(y)) return false;
        return true;
    };

    const double span = x_end - x0;
    const double h_max = opts.h_max > 0.0 ? opts.h_max : span;

    double x = x0;
    Vec y = y0;
    Vec k1(n);
    if (!call_rhs(x, y, k1)) {
        sol.status = OdeStatus::blow_up;
        return sol;
    }

    // initial step heuristic
    double h = opts.h_init;
    if (h <= 0.0) {
        Vec sc = (opts.atol + opts.rtol * y.cwiseAbs().array()).matrix();
        const double d0 = std::sqrt((y.array() / sc.array()).square().mean());
        const double d1n = std::sqrt((k1.array() / sc.array()).square().mean());
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, h_max);
        Vec y1 = y + h0 * k1;
        Vec k2(n);
        double h1 = h0;
        if (call_rhs(x + h0, y1, k2)) {
            const double d2 = std::sqrt(((k2 - k1).array() / sc.array()).square().mean()) / h0;
            const double dmax = std::max(d1n, d2);
            h1 = dmax > 1e-15 ? std::pow(0.01 / dmax, 0.2) : std::max(1e-6, h0 * 1e-3);
        }
        h = std::min({100.0 * h0, h1, h_max});
    }
    h = std::min(h, h_max);

    double event_prev = 0.0;
    bool have_event_prev = false;
    if (event) {
        event_prev = event(x, y);
        have_event_prev = true;
    }

    double err_old = 1e-4;
    bool last_reject_domain = false;
    const double uround = std::numeric_limits<double>::epsilon();

    Vec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y_new(n), y_stage(n);

    while (x < x_end) {
        if (sol.n_accepted + sol.n_rejected >= opts.max_steps) {
            sol.status = OdeStatus::max_steps;
            sol.x_end = x;
            sol.y_end = y;
            return sol;
        }
        if (h < 16.0 * uround * std::max(std::abs(x), 1.0)) {
            sol.status = last_reject_domain ? OdeStatus::blow_up : OdeStatus::step_underflow;
            sol.x_end = x;
            sol.y_end = y;
            return sol;
        }
        bool last_step = false;
        if (x + h >= x_end) {
            h = x_end - x;
            last_step = true;
        }

        bool stage_ok = true;
        y_stage = y + h * (a21 * k1);
        stage_ok = stage_ok && call_rhs(x + c2 * h, y_stage, k2);
        if (stage_ok) {
            y_stage = y + h * (a31 * k1 + a32 * k2);
            stage_ok = call_rhs(x + c3 * h, y_stage, k3);
        }
        if (stage_ok) {
            y_stage = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
            stage_ok = call_rhs(x + c4 * h, y_stage, k4);
        }
        if (stage_ok) {
            y_stage = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            stage_ok = call_rhs(x + c5 * h, y_stage, k5);
        }
        if (stage_ok) {
            y_stage = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            stage_ok = call_rhs(x + h, y_stage, k6);
        }
        if (stage_ok) {
            y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
            stage_ok = call_rhs(x + h, y_new, k7) && ok_state(y_new);
        }

        if (!stage_ok) {
            last_reject_domain = true;
            ++sol.n_rejected;
            h *= 0.25;
            continue;
        }

        const Vec err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sc =
                opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double q = err_vec[i] / sc;
            err += q * q;
        }
        err = std::sqrt(err / n);

        if (err > 1.0) {
            last_reject_domain = false;
            ++sol.n_rejected;
            const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= fac;
            continue;
        }

        // accepted
        ++sol.n_accepted;
        last_reject_domain = false;

        DenseStep st;
        st.x0 = x;
        st.h = h;
        st.r1 = y;
        st.r2 = y_new - y;
        st.r3 = h * k1 - st.r2;
        st.r4 = st.r2 - h * k7 - st.r3;
        st.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

        bool stop_event = false;
        double x_stop = x + h;
        if (event) {
            const double ev_new = event(x + h, y_new);
            if (have_event_prev && event_prev > 0.0 && ev_new <= 0.0) {
                // bisect on the interpolant for the crossing
                double lo = x, hi = x + h;
                for (int it = 0; it < 100 && (hi - lo) > 1e-15 * std::max(1.0, std::abs(hi));
                     ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (event(mid, st.eval(mid)) > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                x_stop = hi;
                stop_event = true;
            }
            event_prev = ev_new;
            have_event_prev = true;
        }

        if (stop_event) {
            sol.y_end = st.eval(x_stop);
            sol.x_end = x_stop;
            st.h = x_stop - st.x0;  // truncate dense coverage at the stop point
            if (opts.store_steps && st.h > 0.0) sol.steps.push_back(std::move(st));
            sol.status = OdeStatus::event;
            return sol;
        }

        if (opts.store_steps) sol.steps.push_back(std::move(st));

        x += h;
        y.swap(y_new);
        k1.swap(k7);  // FSAL

        if (last_step && x >= x_end) break;

        const double fac = std::clamp(
            0.9 * std::pow(err > 0.0 ? err : 1e-10, -0.7 / 5.0) * std::pow(err_old, 0.4 / 5.0),
            0.2, 5.0);
        err_old = std::max(err, 1e-10);
        h = std::min(h * fac, h_max);
    }

    sol.status = OdeStatus::reached_end;
    sol.x_end = x_end;
    sol.y_end = y;
    return sol;
}

}  // namespace shocklayer
