#include "shocklayer/jump.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "shocklayer/layer.hpp"

namespace shocklayer {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// energy bracket at zeta = 0 (duplicated from the layer module on purpose:
// the rest-point system must stay meaningful for zero dissipation too)
double rest_bracket(const PlasmaState& y, const ModelParams& p, const EosSpec& eos) {
    const double Um = internal_energy(y.T, eos);
    const double ER = p.a_R * y.T * y.T * y.T * y.T;
    const double Bperp2 = y.B2 * y.B2 + y.B3 * y.B3;
    return p.M * (Um + p.phi) + ER - 0.5 * p.M * (y.u * y.u + y.v * y.v + y.w * y.w) -
           (y.u + p.frame_speed) / (2.0 * p.mu_e) * Bperp2 + (y.v / p.mu_e) * p.B1 * y.B2 +
           (y.w / p.mu_e) * p.B1 * y.B3 + p.P * y.u + p.P2star * y.v + p.P3star * y.w -
           (p.E3 * y.B2 - p.E2 * y.B3) / p.mu_e - p.C;
}

PlasmaState state_from_unknowns(const Vec6& z) {
    PlasmaState y;
    y.u = z[0];
    y.v = z[1];
    y.w = z[2];
    y.B2 = z[3];
    y.B3 = z[4];
    y.T = z[5];
    y.zeta2 = 0.0;
    y.zeta3 = 0.0;
    return y;
}

Vec6 residual_at(const Vec6& z, const ModelParams& p, const EosSpec& eos) {
    return rest_point_residual(state_from_unknowns(z), p, eos);
}

Mat6 residual_jacobian(const Vec6& z, const ModelParams& p, const EosSpec& eos) {
    const PlasmaState y = state_from_unknowns(z);
    const double s = p.frame_speed;
    const double u_rel = y.u - s;
    const double rho = p.M / u_rel;
    const double dpt_du = dpressure_drho(rho, y.T, eos) * (-rho / u_rel);
    const double dpt_dT = dpressure_dT(rho, y.T, eos) + (4.0 / 3.0) * p.a_R * y.T * y.T * y.T;
    const double Bperp2 = y.B2 * y.B2 + y.B3 * y.B3;

    Mat6 J = Mat6::Zero();
    // g0 = M v - B1 B2/mu_e - P2*
    J(0, 1) = p.M;
    J(0, 3) = -p.B1 / p.mu_e;
    // g1 = M w - B1 B3/mu_e - P3*
    J(1, 2) = p.M;
    J(1, 4) = -p.B1 / p.mu_e;
    // g2 = Bperp^2/(2 mu_e) + M u - P + p_t
    J(2, 0) = p.M + dpt_du;
    J(2, 3) = y.B2 / p.mu_e;
    J(2, 4) = y.B3 / p.mu_e;
    J(2, 5) = dpt_dT;
    // g3 = E3 + (u B2 - v B1)
    J(3, 0) = y.B2;
    J(3, 1) = -p.B1;
    J(3, 3) = y.u;
    // g4 = -E2 + (u B3 - w B1)
    J(4, 0) = y.B3;
    J(4, 2) = -p.B1;
    J(4, 4) = y.u;
    // g5 = energy bracket at zeta = 0
    J(5, 0) = -p.M * y.u - Bperp2 / (2.0 * p.mu_e) + p.P;
    J(5, 1) = -p.M * y.v + p.B1 * y.B2 / p.mu_e + p.P2star;
    J(5, 2) = -p.M * y.w + p.B1 * y.B3 / p.mu_e + p.P3star;
    J(5, 3) = -(y.u + s) * y.B2 / p.mu_e + y.v * p.B1 / p.mu_e - p.E3 / p.mu_e;
    J(5, 4) = -(y.u + s) * y.B3 / p.mu_e + y.w * p.B1 / p.mu_e + p.E2 / p.mu_e;
    J(5, 5) = p.M * dinternal_energy_dT(y.T, eos) + 4.0 * p.a_R * y.T * y.T * y.T;
    return J;
}

struct NewtonOutcome {
    bool converged = false;
    Vec6 z = Vec6::Zero();
    double residual_norm = 0.0;
};

NewtonOutcome damped_newton(Vec6 z, const ModelParams& p, const EosSpec& eos,
                            const RestPointSearch& search, double u_floor, double T_floor) {
    NewtonOutcome out;
    int polish = 0;
    double rnorm = residual_at(z, p, eos).cwiseAbs().maxCoeff();
    out.z = z;
    out.residual_norm = rnorm;
    for (int it = 0; it < search.max_iterations; ++it) {
        if (rnorm <= search.newton_tol) {
            out.converged = true;
            if (polish++ >= 2 || rnorm == 0.0) break;  // a couple of full steps past the tolerance
        }
        const Vec6 g = residual_at(z, p, eos);
        const Mat6 J = residual_jacobian(z, p, eos);
        Eigen::FullPivLU<Mat6> lu(J);
        if (!lu.isInvertible()) break;
        const Vec6 step = lu.solve(-g);
        if (!step.allFinite()) break;

        bool advanced = false;
        double lambda = 1.0;
        for (int ls = 0; ls < 40; ++ls, lambda *= 0.5) {
            Vec6 trial = z + lambda * step;
            if (!(trial[0] - p.frame_speed > u_floor) || !(trial[5] > T_floor)) continue;
            const double tnorm = residual_at(trial, p, eos).cwiseAbs().maxCoeff();
            if (std::isfinite(tnorm) && tnorm < rnorm) {
                z = trial;
                rnorm = tnorm;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
        out.z = z;
        out.residual_norm = rnorm;
    }
    out.converged = out.converged || rnorm <= search.newton_tol;
    return out;
}

double relative_distance(const PlasmaState& a, const PlasmaState& b) {
    const Vec va = a.to_vector(), vb = b.to_vector();
    double d = 0.0;
    for (int i = 0; i < va.size(); ++i) {
        const double sc = std::max({1.0, std::abs(va[i]), std::abs(vb[i])});
        d = std::max(d, std::abs(va[i] - vb[i]) / sc);
    }
    return d;
}

}  // namespace

Eigen::Matrix<double, 6, 1> rest_point_residual(const PlasmaState& y, const ModelParams& p,
                                                const EosSpec& eos) {
    const double u_rel = y.u - p.frame_speed;
    if (!(u_rel > 0.0)) throw DomainError("rest_point_residual: wave-frame velocity must be positive");
    if (!(y.T > 0.0)) throw DomainError("rest_point_residual: T must be positive");
    const double rho = p.M / u_rel;
    const double p_t = gas_pressure(rho, y.T, eos) + (p.a_R / 3.0) * std::pow(y.T, 4);

    Vec6 g;
    g[0] = p.M * y.v - p.B1 * y.B2 / p.mu_e - p.P2star;
    g[1] = p.M * y.w - p.B1 * y.B3 / p.mu_e - p.P3star;
    g[2] = (y.B2 * y.B2 + y.B3 * y.B3) / (2.0 * p.mu_e) + p.M * y.u - p.P + p_t;
    g[3] = p.E3 + (y.u * y.B2 - y.v * p.B1);
    g[4] = -p.E2 + (y.u * y.B3 - y.w * p.B1);
    g[5] = rest_bracket(y, p, eos);
    return g;
}

FluxConstants constants_from_upstream(const PlasmaState& upstream, const ModelParams& params,
                                      const EosSpec& eos) {
    if (upstream.zeta2 != 0.0 || upstream.zeta3 != 0.0)
        throw ConfigError("constants_from_upstream: upstream carries current, not a quiescent rest point");
    const double u_rel = upstream.u - params.frame_speed;
    if (!(u_rel > 0.0))
        throw ConfigError("constants_from_upstream: wave-frame velocity must be positive");
    if (!(upstream.T > 0.0)) throw ConfigError("constants_from_upstream: T must be positive");

    const double rho = params.M / u_rel;
    const double p_t =
        gas_pressure(rho, upstream.T, eos) + (params.a_R / 3.0) * std::pow(upstream.T, 4);

    FluxConstants c;
    c.M = params.M;
    c.B1 = params.B1;
    c.P = params.M * upstream.u + p_t +
          (upstream.B2 * upstream.B2 + upstream.B3 * upstream.B3) / (2.0 * params.mu_e);
    c.P2star = params.M * upstream.v - params.B1 * upstream.B2 / params.mu_e;
    c.P3star = params.M * upstream.w - params.B1 * upstream.B3 / params.mu_e;
    c.E3 = -(upstream.u * upstream.B2 - upstream.v * params.B1);
    c.E2 = upstream.u * upstream.B3 - upstream.w * params.B1;

    ModelParams filled = params;
    filled.P = c.P;
    filled.P2star = c.P2star;
    filled.P3star = c.P3star;
    filled.E2 = c.E2;
    filled.E3 = c.E3;
    filled.C = 0.0;
    c.C = rest_bracket(upstream, filled, eos);
    return c;
}

RestPoint classify_rest_point(const PlasmaState& point, const ModelParams& params,
                              const EosSpec& eos) {
    RestPoint rp;
    rp.state = point;
    rp.state.zeta2 = 0.0;
    rp.state.zeta3 = 0.0;
    rp.residual_norm = rest_point_residual(rp.state, params, eos).cwiseAbs().maxCoeff();

    const LayerSystem sys(params, eos);
    rp.jacobian = jacobian(rp.state, sys);

    Eigen::EigenSolver<Mat> es(rp.jacobian);
    if (es.info() != Eigen::Success)
        throw NumericError("classify_rest_point: eigen-decomposition failed");

    // deterministic ordering: descending real part, then descending imaginary part
    std::vector<int> order(8);
    for (int i = 0; i < 8; ++i) order[i] = i;
    const auto& ev = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (ev[a].real() != ev[b].real()) return ev[a].real() > ev[b].real();
        return ev[a].imag() > ev[b].imag();
    });

    rp.eigenvalues.resize(8);
    rp.eigenvectors.resize(8, 8);
    double spectral_radius = 0.0;
    for (int i = 0; i < 8; ++i) spectral_radius = std::max(spectral_radius, std::abs(ev[i]));
    const double center_thr = 1e-8 * std::max(spectral_radius, 1e-300);

    for (int i = 0; i < 8; ++i) {
        rp.eigenvalues[i] = ev[order[i]];
        rp.eigenvectors.col(i) = es.eigenvectors().col(order[i]);
        const double re = rp.eigenvalues[i].real();
        if (re > center_thr)
            ++rp.n_unstable;
        else if (re < -center_thr)
            ++rp.n_stable;
        else
            ++rp.n_center;
    }
    return rp;
}

RestPointReport find_rest_points(const FluxConstants& constants, const ModelParams& params,
                                 const EosSpec& eos, const RestPointSearch& search) {
    ModelParams p = params;
    p.M = constants.M;
    p.P = constants.P;
    p.P2star = constants.P2star;
    p.P3star = constants.P3star;
    p.C = constants.C;
    p.E2 = constants.E2;
    p.E3 = constants.E3;
    p.B1 = constants.B1;

    // the upstream state is recovered from the constants themselves: seed boxes
    // are expressed relative to the wave-frame velocity scale M-free
    const double s = p.frame_speed;

    // assemble the seed list
    struct Seed {
        Vec6 z;
    };
    std::vector<Seed> seeds;

    // automatic box needs a reference scale; use P/M as a velocity scale when
    // no box is given (P = M u + p_t + ... >= M u at rest points)
    double u_lo = search.u_min, u_hi = search.u_max;
    if (u_lo == 0.0 && u_hi == 0.0) {
        const double u_scale = std::abs(constants.P / constants.M);
        u_lo = s + 0.02 * u_scale;
        u_hi = s + 1.5 * u_scale;
    }
    double T_lo = search.T_min, T_hi = search.T_max;
    if (T_lo == 0.0 && T_hi == 0.0) {
        const double T_scale =
            std::abs(constants.C / (constants.M * dinternal_energy_dT(1.0, eos)));
        T_lo = 1e-3 * T_scale;
        T_hi = 10.0 * T_scale;
    }

    const double B_scale = std::max({std::abs(p.B1), std::abs(constants.E3), 0.5});

    for (int iu = 0; iu < search.n_u; ++iu) {
        const double u = u_lo + (u_hi - u_lo) * (iu + 0.5) / search.n_u;
        if (!(u - s > 0.0)) continue;
        for (int iT = 0; iT < search.n_T; ++iT) {
            const double T = T_lo + (T_hi - T_lo) * (iT + 0.5) / search.n_T;
            if (!(T > 0.0)) continue;

            // the transverse pairs (v,B2) and (w,B3) are linear for fixed u:
            //   M v - (B1/mu_e) B2 = P2*,   -B1 v + u B2 = -E3
            //   M w - (B1/mu_e) B3 = P3*,   -B1 w + u B3 =  E2
            const double det = p.M * u - p.B1 * p.B1 / p.mu_e;
            std::vector<std::array<double, 4>> transverse;
            if (std::abs(det) > 1e-10 * std::max(1.0, std::abs(p.M * u))) {
                const double v = (p.P2star * u - (p.B1 / p.mu_e) * p.E3) / det;
                const double B2 = (-p.E3 * p.M + p.B1 * p.P2star) / det;
                const double w = (p.P3star * u + (p.B1 / p.mu_e) * p.E2) / det;
                const double B3 = (p.E2 * p.M + p.B1 * p.P3star) / det;
                transverse.push_back({v, w, B2, B3});
            } else {
                transverse.push_back({0.0, 0.0, 0.0, 0.0});
            }
            if (search.transverse_sign_seeds) {
                transverse.push_back({0.0, 0.0, B_scale, 0.0});
                transverse.push_back({0.0, 0.0, -B_scale, 0.0});
                transverse.push_back({0.0, 0.0, 0.0, B_scale});
                transverse.push_back({0.0, 0.0, 0.0, -B_scale});
            }
            for (const auto& t : transverse) {
                Seed seed;
                seed.z << u, t[0], t[1], t[2], t[3], T;
                seeds.push_back(seed);
            }
        }
    }
    for (const auto& st : search.extra_seeds) {
        Seed seed;
        seed.z << st.u, st.v, st.w, st.B2, st.B3, st.T;
        seeds.push_back(seed);
    }

    const double u_floor = 1e-10 * std::max(1.0, std::abs(u_hi - s));
    const double T_floor = 1e-12 * std::max(1.0, T_hi);

    std::vector<NewtonOutcome> outcomes(seeds.size());
    const int threads = std::max(1, search.threads);
    auto solve_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            outcomes[i] = damped_newton(seeds[i].z, p, eos, search, u_floor, T_floor);
    };
    if (threads == 1 || seeds.size() < 2) {
        solve_range(0, seeds.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (seeds.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(seeds.size(), b + chunk);
            if (b < e) pool.emplace_back(solve_range, b, e);
        }
        for (auto& th : pool) th.join();
    }

    RestPointReport report;
    report.seeds_tried = static_cast<int>(seeds.size());

    std::vector<PlasmaState> roots;
    for (const auto& oc : outcomes) {
        if (!oc.converged) continue;
        ++report.seeds_converged;
        // drop sub-roundoff dust: components far below both the state scale
        // and the residual tolerance would otherwise seed exact invariant
        // subspaces with exponentially amplified garbage
        Vec6 z = oc.z;
        const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
        for (int i = 0; i < 6; ++i)
            if (std::abs(z[i]) < 1e-15 * scale) z[i] = 0.0;
        if (residual_at(z, p, eos).cwiseAbs().maxCoeff() <= search.newton_tol)
            roots.push_back(state_from_unknowns(z));
        else
            roots.push_back(state_from_unknowns(oc.z));
    }

    // deterministic dedup: sort by (u, T, B2, B3), then cluster
    std::sort(roots.begin(), roots.end(), [](const PlasmaState& a, const PlasmaState& b) {
        if (a.u != b.u) return a.u < b.u;
        if (a.T != b.T) return a.T < b.T;
        if (a.B2 != b.B2) return a.B2 < b.B2;
        return a.B3 < b.B3;
    });
    std::vector<PlasmaState> unique_roots;
    for (const auto& r : roots) {
        bool dup = false;
        for (const auto& kept : unique_roots) {
            if (relative_distance(r, kept) <= search.dedup_radius) {
                dup = true;
                break;
            }
            // degenerate (double) roots leave a cluster of Newton stops; two
            // stops belong to one root when the segment between them also
            // satisfies the residual tolerance
            if (relative_distance(r, kept) <= 1e3 * std::sqrt(search.newton_tol)) {
                PlasmaState mid = r;
                const Vec a = r.to_vector(), b = kept.to_vector();
                mid = PlasmaState::from_vector(0.5 * (a + b));
                if (rest_point_residual(mid, p, eos).cwiseAbs().maxCoeff() <=
                    10.0 * search.newton_tol) {
                    dup = true;
                    break;
                }
            }
        }
        if (!dup) unique_roots.push_back(r);
    }

    for (const auto& r : unique_roots) report.roots.push_back(classify_rest_point(r, p, eos));

    // the upstream state must be among the roots (it satisfies the system by
    // construction of the constants)
    bool upstream_found = false;
    for (const auto& r : report.roots)
        if (rest_point_residual(r.state, p, eos).cwiseAbs().maxCoeff() <= search.newton_tol)
            upstream_found = true;
    if (report.roots.empty() || !upstream_found)
        throw NoDownstreamError("find_rest_points: no rest point recovered (not even upstream)");

    return report;
}

JumpPair make_jump_pair(const RestPoint& upstream, const RestPoint& downstream,
                        const FluxConstants& constants) {
    JumpPair pair;
    pair.upstream = upstream;
    pair.downstream = downstream;
    pair.constants = constants;
    return pair;
}

}  // namespace shocklayer
