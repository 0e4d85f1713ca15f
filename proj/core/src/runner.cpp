#include "shocklayer/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>

#include <json.hpp>

#include "shocklayer/diagnostics.hpp"
#include "shocklayer/io.hpp"
#include "shocklayer/jump.hpp"
#include "shocklayer/layer.hpp"
#include "shocklayer/pipeline.hpp"
#include "shocklayer/profile.hpp"
#include "shocklayer/twofluid.hpp"

namespace shocklayer {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NoDownstreamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

void ensure_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir);
}

ordered_json eigenvalues_to_json(const std::vector<std::complex<double>>& ev) {
    ordered_json arr = ordered_json::array();
    for (const auto& l : ev) arr.push_back({l.real(), l.imag()});
    return arr;
}

ordered_json rest_point_to_json(const RestPoint& rp) {
    ordered_json j;
    j["u"] = rp.state.u;
    j["v"] = rp.state.v;
    j["w"] = rp.state.w;
    j["B2"] = rp.state.B2;
    j["B3"] = rp.state.B3;
    j["T"] = rp.state.T;
    j["residual_norm"] = rp.residual_norm;
    j["n_unstable"] = rp.n_unstable;
    j["n_stable"] = rp.n_stable;
    j["n_center"] = rp.n_center;
    j["eigenvalues"] = eigenvalues_to_json(rp.eigenvalues);
    return j;
}

ordered_json constants_to_json(const FluxConstants& c) {
    ordered_json j;
    j["M"] = c.M;
    j["P"] = c.P;
    j["P2star"] = c.P2star;
    j["P3star"] = c.P3star;
    j["C"] = c.C;
    j["E2"] = c.E2;
    j["E3"] = c.E3;
    j["B1"] = c.B1;
    return j;
}

struct PlasmaSetup {
    ModelParams params;       // with constants filled
    EosSpec eos;
    FluxConstants constants;
    RestPointReport roots;
    RestPoint upstream;
};

PlasmaSetup plasma_setup(const RunConfig& cfg) {
    PlasmaSetup s;
    s.eos = cfg.eos;
    ModelParams base = cfg.make_params();
    const PlasmaState up = cfg.upstream_state();
    s.constants = constants_from_upstream(up, base, s.eos);
    s.params = base;
    s.params.P = s.constants.P;
    s.params.P2star = s.constants.P2star;
    s.params.P3star = s.constants.P3star;
    s.params.C = s.constants.C;
    s.params.E2 = s.constants.E2;
    s.params.E3 = s.constants.E3;
    s.roots = find_rest_points(s.constants, s.params, s.eos, cfg.make_search());
    s.upstream = classify_rest_point(up, s.params, s.eos);
    return s;
}

// scalar Burgers embedding through the general conservation-form interface
struct BurgersSetup {
    GeneralFormSystem system;
    FixedPoint left, right;
};

BurgersSetup burgers_setup(const RunConfig& cfg) {
    const double ul = cfg.burgers.u_left;
    const double ur = cfg.burgers.u_right;
    const double nu = cfg.burgers.viscosity;
    const double s = 0.5 * (ul + ur);
    Vec c(1);
    c[0] = s * ul - 0.5 * ul * ul;
    FluxFn flux = [](const Vec& y) {
        Vec f(1);
        f[0] = 0.5 * y[0] * y[0];
        return f;
    };
    ViscFn visc = [nu](const Vec&) {
        Mat B(1, 1);
        B(0, 0) = nu;
        return B;
    };
    GeneralFormSystem sys(1, flux, visc, s, c);
    Vec yl(1), yr(1);
    yl[0] = ul;
    yr[0] = ur;
    FixedPoint left = classify_fixed_point(sys, yl);
    FixedPoint right = classify_fixed_point(sys, yr);
    return BurgersSetup{std::move(sys), std::move(left), std::move(right)};
}

void write_summary(const std::string& path, const ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

int run_restpoints(const RunConfig& cfg, const std::string& out_dir) {
    if (cfg.model != ModelKind::plasma)
        throw ConfigError("restpoints: only the plasma model has rest-point tables");
    ensure_dir(out_dir);
    const PlasmaSetup s = plasma_setup(cfg);

    Table t;
    t.header = {"index", "u",        "v",          "w",        "B2",      "B3",
                "T",     "residual", "n_unstable", "n_stable", "n_center"};
    int idx = 0;
    for (const auto& r : s.roots.roots) {
        t.rows.push_back({static_cast<double>(idx++), r.state.u, r.state.v, r.state.w, r.state.B2,
                          r.state.B3, r.state.T, r.residual_norm,
                          static_cast<double>(r.n_unstable), static_cast<double>(r.n_stable),
                          static_cast<double>(r.n_center)});
    }
    write_table(out_dir + "/restpoints.csv", t);

    ordered_json summary;
    summary["command"] = "restpoints";
    summary["constants"] = constants_to_json(s.constants);
    summary["seeds_tried"] = s.roots.seeds_tried;
    summary["seeds_converged"] = s.roots.seeds_converged;
    ordered_json roots = ordered_json::array();
    for (const auto& r : s.roots.roots) roots.push_back(rest_point_to_json(r));
    summary["roots"] = roots;
    summary["distinct_roots"] = static_cast<int>(s.roots.roots.size());
    write_summary(out_dir + "/restpoints_summary.json", summary);

    std::cout << "restpoints: " << s.roots.roots.size() << " distinct rest point(s)\n";
    return s.roots.roots.size() >= 2 ? 0 : 3;
}

int run_profile(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);

    if (cfg.model == ModelKind::burgers) {
        const BurgersSetup b = burgers_setup(cfg);
        ProfileOptions popts = cfg.make_profile_options();
        const ProfileResult res = find_profile(b.system, b.left, b.right, popts);

        ordered_json summary;
        summary["command"] = "profile";
        summary["model"] = "burgers";
        summary["connected"] = res.connected;
        summary["mismatch"] = res.connected ? res.profile.mismatch : res.best_mismatch;
        summary["starts_tried"] = res.starts_tried;
        if (!res.connected) {
            summary["failure"] = res.failure;
            write_summary(out_dir + "/profile_summary.json", summary);
            std::cout << "profile: no connection found\n";
            return 4;
        }
        summary["width"] = res.profile.width;
        write_summary(out_dir + "/profile_summary.json", summary);

        Table t;
        t.header = {"x", "u"};
        for (std::size_t i = 0; i < res.profile.x.size(); ++i)
            t.rows.push_back({res.profile.x[i], res.profile.samples[i][0]});
        write_table(out_dir + "/profile.csv", t);
        std::cout << "profile: width " << res.profile.width << ", mismatch "
                  << res.profile.mismatch << "\n";
        return 0;
    }

    const ModelParams base = cfg.make_params();
    const ShockSolution sol = solve_shock_profile(base, cfg.eos, cfg.upstream_state(),
                                                  cfg.make_search(), cfg.make_profile_options());
    const ProfileResult& res = sol.profile;
    ModelParams filled = base;
    filled.P = sol.constants.P;
    filled.P2star = sol.constants.P2star;
    filled.P3star = sol.constants.P3star;
    filled.C = sol.constants.C;
    filled.E2 = sol.constants.E2;
    filled.E3 = sol.constants.E3;
    const LayerSystem sys(filled, cfg.eos);

    ordered_json summary;
    summary["command"] = "profile";
    summary["model"] = "plasma";
    summary["constants"] = constants_to_json(sol.constants);
    summary["upstream"] = rest_point_to_json(sol.pair.upstream);
    summary["downstream"] = rest_point_to_json(sol.pair.downstream);
    summary["connected"] = res.connected;
    summary["starts_tried"] = res.starts_tried;
    summary["continuation_steps"] = sol.continuation_steps;

    if (!res.connected) {
        summary["best_mismatch"] = res.best_mismatch;
        summary["failure"] = res.failure;
        write_summary(out_dir + "/profile_summary.json", summary);
        std::cout << "profile: no connection found (best mismatch " << res.best_mismatch << ")\n";
        return 4;
    }

    const Profile& prof = res.profile;
    const ResidualReport report = conservation_residuals(prof, sys, cfg.solver.residual_tol);

    // species temperatures along the profile
    const std::size_t n = prof.x.size();
    std::vector<double> xs(n), us(n), Ts(n), fs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = prof.x[i];
        us[i] = prof.samples[i][0];
        Ts[i] = prof.samples[i][7];
        const double u_rel = us[i] - filled.frame_speed;
        const double nu_x = (filled.M / u_rel) / (cfg.species.m_e + cfg.species.m_i);
        fs[i] = cfg.species.collision_frequency(nu_x);
    }
    const TemperatureSplit split =
        temperature_split(xs, us, Ts, fs, cfg.species.m_e, cfg.species.m_i);

    Table t;
    t.header = {"x",  "u",  "v",   "w",   "B2",  "B3", "zeta2", "zeta3", "T",
                "rho", "p", "p_t", "T_e", "T_i", "J2", "J3",    "residual_worst"};
    for (std::size_t i = 0; i < n; ++i) {
        const PlasmaState y = prof.state_at(i);
        const double u_rel = y.u - filled.frame_speed;
        const double rho = filled.M / u_rel;
        const double pg = gas_pressure(rho, y.T, cfg.eos);
        const double pt = pg + (filled.a_R / 3.0) * std::pow(y.T, 4);
        const double J2 = -y.zeta3 / (u_rel * filled.mu_e);
        const double J3 = y.zeta2 / (u_rel * filled.mu_e);
        t.rows.push_back({prof.x[i], y.u, y.v, y.w, y.B2, y.B3, y.zeta2, y.zeta3, y.T, rho, pg,
                          pt, split.T_e[i], split.T_i[i], J2, J3, report.per_sample_worst[i]});
    }
    write_table(out_dir + "/profile.csv", t);

    summary["mismatch"] = prof.mismatch;
    summary["upstream_distance"] = prof.upstream_distance;
    summary["width"] = prof.width;
    summary["newton_iterations"] = prof.newton_iterations;
    summary["rhs_evaluations"] = prof.rhs_evaluations;
    ordered_json resid;
    resid["max_deviation_M"] = report.max_deviation[0];
    resid["max_deviation_P"] = report.max_deviation[1];
    resid["max_deviation_P2star"] = report.max_deviation[2];
    resid["max_deviation_P3star"] = report.max_deviation[3];
    resid["max_deviation_C"] = report.max_deviation[4];
    resid["worst"] = report.worst;
    resid["tolerance"] = report.tolerance;
    resid["pass"] = report.pass;
    summary["conservation"] = resid;
    write_summary(out_dir + "/profile_summary.json", summary);

    std::cout << "profile: width " << prof.width << ", mismatch " << prof.mismatch
              << ", conservation " << (report.pass ? "pass" : "FAIL") << "\n";
    return report.pass ? 0 : 2;
}

// sweep a single config key over explicit values, warm-starting the profile
// solver across neighbouring values
int run_parameter_sweep(const RunConfig& cfg, const std::string& out_dir) {
    if (cfg.sweep.values.empty())
        throw ConfigError("sweep: parameter sweeps need a nonempty values array");
    if (cfg.model != ModelKind::plasma)
        throw ConfigError("sweep: parameter sweeps drive the plasma model");

    Table t;
    t.header = {"value", "connected", "width", "mismatch"};
    ordered_json pts = ordered_json::array();
    std::optional<ProfileWarmStart> warm;
    int breaks = 0;
    for (const double value : cfg.sweep.values) {
        const RunConfig cv = parse_config_text(
            cfg.raw_text, {{cfg.sweep.parameter, format_g17(value)}});
        ProfileOptions popts = cv.make_profile_options();
        popts.warm_start = warm;
        bool connected = false;
        double width = 0.0, mismatch = 0.0;
        try {
            const ShockSolution sol = solve_shock_profile(cv.make_params(), cv.eos,
                                                          cv.upstream_state(), cv.make_search(),
                                                          popts);
            connected = sol.profile.connected;
            if (connected) {
                width = sol.profile.profile.width;
                mismatch = sol.profile.profile.mismatch;
                warm = sol.profile.warm_start;
            } else {
                mismatch = sol.profile.best_mismatch;
            }
        } catch (const NoDownstreamError&) {
            connected = false;
        }
        if (!connected) ++breaks;
        t.rows.push_back({value, connected ? 1.0 : 0.0, width, mismatch});
        ordered_json pj;
        pj["value"] = value;
        pj["connected"] = connected;
        pj["width"] = width;
        pj["mismatch"] = mismatch;
        pts.push_back(pj);
    }
    write_table(out_dir + "/sweep.csv", t);

    ordered_json summary;
    summary["command"] = "sweep";
    summary["parameter"] = cfg.sweep.parameter;
    summary["points"] = pts;
    summary["breaks"] = breaks;
    summary["verdict"] =
        breaks == 0 ? "all-connected" : std::to_string(breaks) + " value(s) without a profile";
    write_summary(out_dir + "/sweep_summary.json", summary);
    std::cout << "sweep: " << summary["verdict"].get<std::string>() << "\n";
    return 0;
}

int run_sweep(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    if (!cfg.sweep.parameter.empty()) return run_parameter_sweep(cfg, out_dir);

    GermainOptions gopts;
    gopts.profile = cfg.make_profile_options();
    gopts.neighborhood_fraction = cfg.sweep.neighborhood_fraction;
    gopts.min_multiplier = cfg.sweep.min_multiplier;
    gopts.monotone_slack = cfg.sweep.monotone_slack;

    GermainReport report;
    if (cfg.model == ModelKind::burgers) {
        const BurgersSetup b = burgers_setup(cfg);
        report = germain_sweep(b.system, b.left, b.right, cfg.sweep.multipliers, gopts);
    } else {
        const ModelParams base = cfg.make_params();
        const ShockSolution sol = solve_shock_profile(base, cfg.eos, cfg.upstream_state(),
                                                      cfg.make_search(), gopts.profile);
        if (!sol.profile.connected)
            throw NumericError("sweep: no base profile: " + sol.profile.failure);
        gopts.profile.warm_start = sol.profile.warm_start;
        ModelParams filled = base;
        filled.P = sol.constants.P;
        filled.P2star = sol.constants.P2star;
        filled.P3star = sol.constants.P3star;
        filled.C = sol.constants.C;
        filled.E2 = sol.constants.E2;
        filled.E3 = sol.constants.E3;
        const LayerSystem sys(filled, cfg.eos);
        report = germain_sweep(sys, sol.pair, cfg.sweep.multipliers, gopts);
    }

    Table t;
    t.header = {"multiplier", "connected", "width", "sup_distance"};
    for (const auto& pearl : report.points)
        t.rows.push_back({pearl.multiplier, pearl.connected ? 1.0 : 0.0, pearl.width,
                          pearl.sup_distance});
    write_table(out_dir + "/sweep.csv", t);

    ordered_json summary;
    summary["command"] = "sweep";
    summary["verdict"] = report.verdict;
    summary["germain_stable"] = report.germain_stable;
    summary["neighborhood"] = report.neighborhood;
    ordered_json pts = ordered_json::array();
    for (const auto& pearl : report.points) {
        ordered_json p;
        p["multiplier"] = pearl.multiplier;
        p["connected"] = pearl.connected;
        p["width"] = pearl.width;
        p["sup_distance"] = pearl.sup_distance;
        pts.push_back(p);
    }
    summary["points"] = pts;
    write_summary(out_dir + "/sweep_summary.json", summary);

    std::cout << "sweep: " << report.verdict << "\n";
    return 0;
}

int run_check(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    bool all_pass = true;
    ordered_json summary;
    summary["command"] = "check";

    // electromagnetic divergence identities: second-order convergence
    {
        std::vector<double> hs, errs_m, errs_p;
        ModelParams p = ModelParams{};
        p.mu_e = cfg.fields.mu_e;
        p.eps = cfg.fields.eps;
        for (int nGrid : cfg.diagnostics.grids) {
            const SyntheticFields f =
                band_limited_fields(nGrid, cfg.diagnostics.max_mode, cfg.diagnostics.field_seed);
            const LorentzCheckResult r = lorentz_divergence_check(f, p);
            hs.push_back(1.0 / nGrid);
            errs_m.push_back(r.max_error_momentum);
            errs_p.push_back(r.max_error_poynting);
        }
        auto slope = [&](const std::vector<double>& errs) {
            // least-squares slope of log(err) vs log(h)
            const int n = static_cast<int>(errs.size());
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (int i = 0; i < n; ++i) {
                const double lx = std::log(hs[i]);
                const double ly = std::log(std::max(errs[i], 1e-300));
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
            }
            return (n * sxy - sx * sy) / (n * sxx - sx * sx);
        };
        const double slope_m = slope(errs_m);
        const double slope_p = slope(errs_p);
        const bool pass = std::abs(slope_m - 2.0) <= cfg.diagnostics.slope_tolerance &&
                          std::abs(slope_p - 2.0) <= cfg.diagnostics.slope_tolerance;
        all_pass = all_pass && pass;
        ordered_json jl;
        jl["slope_momentum"] = slope_m;
        jl["slope_poynting"] = slope_p;
        jl["errors_momentum"] = errs_m;
        jl["errors_poynting"] = errs_p;
        jl["pass"] = pass;
        summary["lorentz_identities"] = jl;
        std::cout << (pass ? "PASS" : "FAIL") << " lorentz-poynting-identities: slopes "
                  << slope_m << ", " << slope_p << "\n";
    }

    // Ohm dissipation identity on random samples
    {
        std::mt19937_64 rng(cfg.seed + 1);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_real_distribution<double> sig(0.1, 10.0);
        double worst = 0.0;
        for (int i = 0; i < cfg.diagnostics.joule_samples; ++i) {
            const Vec3 E(unit(rng), unit(rng), unit(rng));
            const Vec3 u(unit(rng), unit(rng), unit(rng));
            const Vec3 B(unit(rng), unit(rng), unit(rng));
            const double sigma = sig(rng);
            const Vec3 current = sigma * (E + u.cross(B));
            const auto [lhs, rhs] = joule_identity_check(current, E, u, B, sigma);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0));
        }
        const bool pass = worst <= 1e-12;
        all_pass = all_pass && pass;
        ordered_json jj;
        jj["samples"] = cfg.diagnostics.joule_samples;
        jj["worst_relative_error"] = worst;
        jj["pass"] = pass;
        summary["joule_identity"] = jj;
        std::cout << (pass ? "PASS" : "FAIL") << " joule-identity: worst " << worst << "\n";
    }

    // frame-shift invariance on the configured velocities
    if (!cfg.diagnostics.galilean_velocities.empty()) {
        if (cfg.model != ModelKind::plasma)
            throw ConfigError("check: galilean velocities need the plasma model");
        const PlasmaSetup s = plasma_setup(cfg);
        const LayerSystem sys(s.params, s.eos);
        GalileanCheckOptions gopts;
        gopts.profile = cfg.make_profile_options();
        gopts.search = cfg.make_search();
        ordered_json arr = ordered_json::array();
        for (const auto& v : cfg.diagnostics.galilean_velocities) {
            const Vec3 V(v[0], v[1], v[2]);
            const GalileanCheckResult r = galilean_check(sys, cfg.upstream_state(), V, gopts);
            const bool pass = r.max_discrepancy <= cfg.solver.mismatch_tol;
            all_pass = all_pass && pass;
            ordered_json jg;
            jg["V"] = {v[0], v[1], v[2]};
            jg["max_discrepancy"] = r.max_discrepancy;
            jg["pass"] = pass;
            arr.push_back(jg);
            std::cout << (pass ? "PASS" : "FAIL") << " galilean-shift [" << v[0] << "," << v[1]
                      << "," << v[2] << "]: discrepancy " << r.max_discrepancy << "\n";
        }
        summary["galilean"] = arr;
    }

    summary["all_pass"] = all_pass;
    write_summary(out_dir + "/check_report.json", summary);
    return all_pass ? 0 : 2;
}

}  // namespace

int cmd_restpoints(const RunConfig& config, const std::string& out_dir) {
    return guarded([&] { return run_restpoints(config, out_dir); });
}
int cmd_profile(const RunConfig& config, const std::string& out_dir) {
    return guarded([&] { return run_profile(config, out_dir); });
}
int cmd_sweep(const RunConfig& config, const std::string& out_dir) {
    return guarded([&] { return run_sweep(config, out_dir); });
}
int cmd_check(const RunConfig& config, const std::string& out_dir) {
    return guarded([&] { return run_check(config, out_dir); });
}

}  // namespace shocklayer
