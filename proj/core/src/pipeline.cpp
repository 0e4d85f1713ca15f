#include "shocklayer/pipeline.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>

namespace shocklayer {

namespace {

double rel_distance(const PlasmaState& a, const PlasmaState& b) {
    const Vec va = a.to_vector(), vb = b.to_vector();
    double d = 0.0;
    for (int i = 0; i < va.size(); ++i)
        d = std::max(d, std::abs(va[i] - vb[i]) / std::max(1.0, std::abs(vb[i])));
    return d;
}

struct StageResult {
    FluxConstants constants;
    RestPointReport roots;
    JumpPair pair;
    ProfileResult profile;
};

// one full solve at a given upstream state
StageResult solve_stage(const ModelParams& base, const EosSpec& eos, const PlasmaState& upstream,
                        const RestPointSearch& search, const ProfileOptions& popts,
                        const PlasmaState* prev_downstream) {
    StageResult out;
    out.constants = constants_from_upstream(upstream, base, eos);

    ModelParams filled = base;
    filled.P = out.constants.P;
    filled.P2star = out.constants.P2star;
    filled.P3star = out.constants.P3star;
    filled.C = out.constants.C;
    filled.E2 = out.constants.E2;
    filled.E3 = out.constants.E3;

    RestPointSearch s = search;
    s.extra_seeds.push_back(upstream);
    if (prev_downstream) s.extra_seeds.push_back(*prev_downstream);
    out.roots = find_rest_points(out.constants, filled, eos, s);

    const RestPoint* down = pick_downstream(out.roots, upstream, prev_downstream);
    if (!down) throw NoDownstreamError("solve_shock_profile: only the upstream rest point exists");

    out.pair = make_jump_pair(classify_rest_point(upstream, filled, eos), *down, out.constants);
    const LayerSystem sys(filled, eos);
    out.profile = find_profile(sys, out.pair, popts);
    return out;
}

}  // namespace

const RestPoint* pick_downstream(const RestPointReport& report, const PlasmaState& upstream,
                                 const PlasmaState* previous) {
    if (previous) {
        const RestPoint* best = nullptr;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& r : report.roots) {
            if (rel_distance(r.state, upstream) <= 1e-6) continue;
            const double d = rel_distance(r.state, *previous);
            if (d < best_d) {
                best_d = d;
                best = &r;
            }
        }
        if (best) return best;
    }
    const RestPoint* best = nullptr;
    double best_d = 1e-6;
    for (const auto& r : report.roots) {
        const double d = rel_distance(r.state, upstream);
        if (d > best_d) {
            best_d = d;
            best = &r;
        }
    }
    return best;
}

ShockSolution solve_shock_profile(const ModelParams& base, const EosSpec& eos,
                                  const PlasmaState& upstream, const RestPointSearch& search,
                                  const ProfileOptions& popts) {
    ShockSolution out;

    // keep failed attempts cheap: the continuation fallback is the workhorse
    // for hard magnetized cases
    ProfileOptions direct_opts = popts;
    direct_opts.multi_starts = std::min(direct_opts.multi_starts, 2);
    direct_opts.max_newton_iterations = std::min(direct_opts.max_newton_iterations, 30);

    StageResult direct = solve_stage(base, eos, upstream, search, direct_opts, nullptr);
    if (direct.profile.connected || (upstream.B2 == 0.0 && upstream.B3 == 0.0)) {
        out.constants = direct.constants;
        out.roots = std::move(direct.roots);
        out.pair = direct.pair;
        out.profile = std::move(direct.profile);
        return out;
    }

    // continuation in the upstream transverse-field strength, starting from
    // the embedded gas-dynamic orbit; a warm-started stage either converges
    // in a few corrector steps or the step was too big, so keep stages cheap
    ProfileOptions stage_opts = direct_opts;
    stage_opts.multi_starts = 1;
    stage_opts.max_newton_iterations = 12;
    stage_opts.allow_fresh_init = false;
    auto upstream_at = [&](double tau) {
        PlasmaState u = upstream;
        u.B2 = tau * upstream.B2;
        u.B3 = tau * upstream.B3;
        return u;
    };

    double tau = 0.0;
    StageResult cur = solve_stage(base, eos, upstream_at(0.0), search, direct_opts, nullptr);
    if (!cur.profile.connected) {
        // not even the field-free embedding connects; report the direct result
        out.constants = direct.constants;
        out.roots = std::move(direct.roots);
        out.pair = direct.pair;
        out.profile = std::move(direct.profile);
        return out;
    }

    const bool debug = std::getenv("SHOCKLAYER_DEBUG") != nullptr;
    int steps = 1;
    double step = 0.25;
    PlasmaState prev_down = cur.pair.downstream.state;
    while (tau < 1.0 && steps < 200) {
        const double tau_next = std::min(1.0, tau + step);
        stage_opts.warm_start = cur.profile.warm_start;
        StageResult trial =
            solve_stage(base, eos, upstream_at(tau_next), search, stage_opts, &prev_down);
        ++steps;
        if (debug)
            std::fprintf(stderr, "[homotopy] tau=%.4f -> %s (%s)\n", tau_next,
                         trial.profile.connected ? "ok" : "fail",
                         trial.profile.failure.c_str());
        if (trial.profile.connected) {
            cur = std::move(trial);
            prev_down = cur.pair.downstream.state;
            tau = tau_next;
            step = std::min(step * 1.6, 0.5);
        } else {
            step *= 0.5;
            if (step < 1e-3) break;
        }
    }

    out.continuation_steps = steps;
    if (tau >= 1.0) {
        out.constants = cur.constants;
        out.roots = std::move(cur.roots);
        out.pair = cur.pair;
        out.profile = std::move(cur.profile);
    } else {
        out.constants = direct.constants;
        out.roots = std::move(direct.roots);
        out.pair = direct.pair;
        out.profile = std::move(direct.profile);
        out.profile.failure = "no-connection-found: transverse-field continuation broke at tau=" +
                              std::to_string(tau);
    }
    return out;
}

}  // namespace shocklayer
