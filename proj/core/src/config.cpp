#include "shocklayer/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace shocklayer {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config" + where + ": " + what);
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key())) fail(where + "/" + item.key(), "unknown key");
}

double num(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

double get_num(const json& j, const std::string& where, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    return num(j.at(key), where + "/" + key);
}

int get_int(const json& j, const std::string& where, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
    return v.get<int>();
}

// a coefficient entry is either a number or the string "derived"
std::optional<double> coefficient(const json& j, const std::string& where, const char* key,
                                  std::optional<double> fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && v.get<std::string>() == "derived") return std::nullopt;
    fail(where + "/" + key, "expected a number or \"derived\"");
}

void parse_upstream(const json& j, UpstreamBlock& b) {
    check_keys(j, "/upstream", {"rho", "u", "v", "w", "B1", "B2", "B3", "T"});
    b.rho = get_num(j, "/upstream", "rho", b.rho);
    b.u = get_num(j, "/upstream", "u", b.u);
    b.v = get_num(j, "/upstream", "v", b.v);
    b.w = get_num(j, "/upstream", "w", b.w);
    b.B1 = get_num(j, "/upstream", "B1", b.B1);
    b.B2 = get_num(j, "/upstream", "B2", b.B2);
    b.B3 = get_num(j, "/upstream", "B3", b.B3);
    b.T = get_num(j, "/upstream", "T", b.T);
    if (!(b.rho > 0.0)) fail("/upstream/rho", "must be positive");
    if (!(b.T > 0.0)) fail("/upstream/T", "must be positive");
}

void parse_species(const json& j, SpeciesSpec& s) {
    check_keys(j, "/species", {"m_e", "m_i", "e", "collision", "f", "c1"});
    s.m_e = get_num(j, "/species", "m_e", s.m_e);
    s.m_i = get_num(j, "/species", "m_i", s.m_i);
    s.e_charge = get_num(j, "/species", "e", s.e_charge);
    if (j.contains("collision")) {
        const auto model = j.at("collision").get<std::string>();
        if (model == "constant")
            s.collision = CollisionModel::constant_frequency;
        else if (model == "proportional")
            s.collision = CollisionModel::proportional_to_density;
        else
            fail("/species/collision", "expected \"constant\" or \"proportional\"");
    }
    s.f1 = get_num(j, "/species", "f", s.f1);
    s.c1 = get_num(j, "/species", "c1", s.c1);
    s.validate();
}

void parse_eos(const json& j, EosSpec& e) {
    check_keys(j, "/eos", {"kind", "R_gas", "gamma"});
    if (j.contains("kind")) {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "ideal-gas")
            e.kind = EosKind::ideal_gas;
        else if (kind == "user-tabulated")
            e.kind = EosKind::user_tabulated;
        else
            fail("/eos/kind", "expected \"ideal-gas\" or \"user-tabulated\"");
    }
    e.R_gas = get_num(j, "/eos", "R_gas", e.R_gas);
    e.gamma_adiabatic = get_num(j, "/eos", "gamma", e.gamma_adiabatic);
    e.validate();
}

void parse_solver(const json& j, SolverBlock& s) {
    check_keys(j, "/solver",
               {"rest_newton_tol", "dedup_radius", "seed_n_u", "seed_n_T", "u_min", "u_max",
                "T_min", "T_max", "rtol", "atol", "launch_offset", "capture_radius", "eps_up",
                "mismatch_tol", "residual_tol", "max_span", "match_tol", "max_newton_iterations",
                "multi_starts", "frame_speed"});
    s.rest_newton_tol = get_num(j, "/solver", "rest_newton_tol", s.rest_newton_tol);
    s.dedup_radius = get_num(j, "/solver", "dedup_radius", s.dedup_radius);
    s.seed_n_u = get_int(j, "/solver", "seed_n_u", s.seed_n_u);
    s.seed_n_T = get_int(j, "/solver", "seed_n_T", s.seed_n_T);
    s.u_min = get_num(j, "/solver", "u_min", s.u_min);
    s.u_max = get_num(j, "/solver", "u_max", s.u_max);
    s.T_min = get_num(j, "/solver", "T_min", s.T_min);
    s.T_max = get_num(j, "/solver", "T_max", s.T_max);
    s.rtol = get_num(j, "/solver", "rtol", s.rtol);
    s.atol = get_num(j, "/solver", "atol", s.atol);
    s.launch_offset = get_num(j, "/solver", "launch_offset", s.launch_offset);
    s.capture_radius = get_num(j, "/solver", "capture_radius", s.capture_radius);
    s.eps_up = get_num(j, "/solver", "eps_up", s.eps_up);
    s.mismatch_tol = get_num(j, "/solver", "mismatch_tol", s.mismatch_tol);
    s.residual_tol = get_num(j, "/solver", "residual_tol", s.residual_tol);
    s.max_span = get_num(j, "/solver", "max_span", s.max_span);
    s.match_tol = get_num(j, "/solver", "match_tol", s.match_tol);
    s.max_newton_iterations = get_int(j, "/solver", "max_newton_iterations", s.max_newton_iterations);
    s.multi_starts = get_int(j, "/solver", "multi_starts", s.multi_starts);
    s.frame_speed = get_num(j, "/solver", "frame_speed", s.frame_speed);
}

void parse_sweep(const json& j, SweepBlock& s) {
    check_keys(j, "/sweep", {"multipliers", "min_multiplier", "neighborhood_fraction",
                             "monotone_slack", "parameter", "values"});
    if (j.contains("parameter")) {
        if (!j.at("parameter").is_string()) fail("/sweep/parameter", "expected a config path");
        s.parameter = j.at("parameter").get<std::string>();
    }
    if (j.contains("values")) {
        if (!j.at("values").is_array()) fail("/sweep/values", "expected an array");
        s.values.clear();
        for (const auto& v : j.at("values")) s.values.push_back(num(v, "/sweep/values"));
    }
    if (j.contains("multipliers")) {
        if (!j.at("multipliers").is_array()) fail("/sweep/multipliers", "expected an array");
        s.multipliers.clear();
        for (const auto& v : j.at("multipliers")) s.multipliers.push_back(num(v, "/sweep/multipliers"));
        if (s.multipliers.empty()) fail("/sweep/multipliers", "must not be empty");
    }
    s.min_multiplier = get_num(j, "/sweep", "min_multiplier", s.min_multiplier);
    s.neighborhood_fraction = get_num(j, "/sweep", "neighborhood_fraction", s.neighborhood_fraction);
    s.monotone_slack = get_num(j, "/sweep", "monotone_slack", s.monotone_slack);
}

void parse_diagnostics(const json& j, DiagnosticsBlock& d) {
    check_keys(j, "/diagnostics", {"grids", "max_mode", "field_seed", "joule_samples",
                                   "slope_tolerance", "galilean_velocities"});
    if (j.contains("grids")) {
        d.grids.clear();
        for (const auto& v : j.at("grids")) {
            if (!v.is_number_integer()) fail("/diagnostics/grids", "expected integers");
            d.grids.push_back(v.get<int>());
        }
    }
    d.max_mode = get_int(j, "/diagnostics", "max_mode", d.max_mode);
    d.field_seed = static_cast<unsigned>(get_int(j, "/diagnostics", "field_seed",
                                                 static_cast<int>(d.field_seed)));
    d.joule_samples = get_int(j, "/diagnostics", "joule_samples", d.joule_samples);
    d.slope_tolerance = get_num(j, "/diagnostics", "slope_tolerance", d.slope_tolerance);
    if (j.contains("galilean_velocities")) {
        d.galilean_velocities.clear();
        for (const auto& v : j.at("galilean_velocities")) {
            if (!v.is_array() || v.size() != 3)
                fail("/diagnostics/galilean_velocities", "expected [Vx, Vy, Vz] triples");
            d.galilean_velocities.push_back(
                {num(v[0], "/diagnostics"), num(v[1], "/diagnostics"), num(v[2], "/diagnostics")});
        }
    }
}

json leaf_from_string(const std::string& value) {
    // integers stay integers, other numbers become doubles, the rest strings
    {
        std::istringstream ss(value);
        long long i;
        ss >> i;
        if (ss && ss.eof()) return json(i);
    }
    {
        std::istringstream ss(value);
        double d;
        ss >> d;
        if (ss && ss.eof()) return json(d);
    }
    return json(value);
}

void apply_override(json& root, const std::string& key, const std::string& value) {
    json* node = &root;
    std::string rest = key;
    std::size_t pos;
    while ((pos = rest.find('.')) != std::string::npos) {
        const std::string head = rest.substr(0, pos);
        rest = rest.substr(pos + 1);
        if (!node->contains(head)) (*node)[head] = json::object();
        node = &(*node)[head];
    }
    (*node)[rest] = leaf_from_string(value);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const Overrides& overrides) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    for (const auto& [k, v] : overrides) apply_override(j, k, v);
    const std::string raw_text = j.dump();

    check_keys(j, "", {"model", "upstream", "species", "dissipation", "eos", "fields",
                       "radiation", "phi", "solver", "sweep", "outputs", "diagnostics",
                       "burgers", "seed", "threads"});

    RunConfig cfg;
    if (j.contains("model")) {
        const auto m = j.at("model").get<std::string>();
        if (m == "plasma")
            cfg.model = ModelKind::plasma;
        else if (m == "burgers")
            cfg.model = ModelKind::burgers;
        else
            fail("/model", "expected \"plasma\" or \"burgers\"");
    }
    if (j.contains("upstream")) parse_upstream(j.at("upstream"), cfg.upstream);
    if (j.contains("species")) parse_species(j.at("species"), cfg.species);
    if (j.contains("dissipation")) {
        const json& d = j.at("dissipation");
        check_keys(d, "/dissipation", {"eta", "mu_visc", "kappa", "beta", "sigma", "chi"});
        cfg.dissipation.eta = get_num(d, "/dissipation", "eta", cfg.dissipation.eta);
        cfg.dissipation.mu_visc = get_num(d, "/dissipation", "mu_visc", cfg.dissipation.mu_visc);
        cfg.dissipation.kappa = get_num(d, "/dissipation", "kappa", cfg.dissipation.kappa);
        cfg.dissipation.beta = coefficient(d, "/dissipation", "beta", cfg.dissipation.beta);
        cfg.dissipation.sigma = coefficient(d, "/dissipation", "sigma", cfg.dissipation.sigma);
        cfg.dissipation.chi = coefficient(d, "/dissipation", "chi", cfg.dissipation.chi);
        if (!(cfg.dissipation.kappa >= 0.0)) fail("/dissipation/kappa", "must be nonnegative");
        if (!(cfg.dissipation.eta >= 0.0)) fail("/dissipation/eta", "must be nonnegative");
        if (!(cfg.dissipation.mu_visc >= 0.0)) fail("/dissipation/mu_visc", "must be nonnegative");
    }
    if (j.contains("eos")) parse_eos(j.at("eos"), cfg.eos);
    if (j.contains("fields")) {
        const json& f = j.at("fields");
        check_keys(f, "/fields", {"mu_e", "eps", "E1"});
        cfg.fields.mu_e = get_num(f, "/fields", "mu_e", cfg.fields.mu_e);
        cfg.fields.eps = get_num(f, "/fields", "eps", cfg.fields.eps);
        cfg.fields.E1 = get_num(f, "/fields", "E1", cfg.fields.E1);
    }
    if (j.contains("radiation")) {
        const json& r = j.at("radiation");
        check_keys(r, "/radiation", {"a_R", "D_R"});
        cfg.radiation.a_R = get_num(r, "/radiation", "a_R", cfg.radiation.a_R);
        cfg.radiation.D_R = get_num(r, "/radiation", "D_R", cfg.radiation.D_R);
    }
    if (j.contains("phi")) cfg.phi = num(j.at("phi"), "/phi");
    if (j.contains("solver")) parse_solver(j.at("solver"), cfg.solver);
    if (j.contains("sweep")) parse_sweep(j.at("sweep"), cfg.sweep);
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        check_keys(o, "/outputs", {"samples"});
        cfg.outputs.samples = get_int(o, "/outputs", "samples", cfg.outputs.samples);
        if (cfg.outputs.samples < 51) fail("/outputs/samples", "need at least 51 samples");
    }
    if (j.contains("diagnostics")) parse_diagnostics(j.at("diagnostics"), cfg.diagnostics);
    if (j.contains("burgers")) {
        const json& b = j.at("burgers");
        check_keys(b, "/burgers", {"u_left", "u_right", "viscosity"});
        cfg.burgers.u_left = get_num(b, "/burgers", "u_left", cfg.burgers.u_left);
        cfg.burgers.u_right = get_num(b, "/burgers", "u_right", cfg.burgers.u_right);
        cfg.burgers.viscosity = get_num(b, "/burgers", "viscosity", cfg.burgers.viscosity);
        if (!(cfg.burgers.viscosity > 0.0)) fail("/burgers/viscosity", "must be positive");
    }
    if (j.contains("seed")) cfg.seed = static_cast<unsigned>(get_int(j, "", "seed", 0));
    if (j.contains("threads")) cfg.threads = get_int(j, "", "threads", 1);
    if (cfg.threads < 1) fail("/threads", "must be at least 1");
    cfg.raw_text = raw_text;
    return cfg;
}

RunConfig load_config(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides);
}

ModelParams RunConfig::make_params() const {
    ModelParams p;
    p.M = mass_flux();
    if (!(p.M > 0.0)) throw ConfigError("config: upstream mass flux must be positive");
    p.B1 = upstream.B1;
    p.E1 = fields.E1;
    p.mu_e = fields.mu_e;
    p.eps = fields.eps;
    p.eta = dissipation.eta;
    p.mu_visc = dissipation.mu_visc;
    p.kappa = dissipation.kappa;
    p.a_R = radiation.a_R;
    p.D_R = radiation.D_R;
    p.phi = phi;
    p.frame_speed = solver.frame_speed;
    p.gamma_e = species.gamma_e();
    p.gamma_i = species.gamma_i();

    const double nu = upstream.rho / (species.m_e + species.m_i);
    const auto tc = transport_coefficients(species, upstream.rho, nu, p.M);
    p.alpha12 = tc.alpha12;

    const bool derived_any = !dissipation.beta || !dissipation.sigma || !dissipation.chi;
    DerivedLayerCoefficients dl;
    if (derived_any) dl = derived_layer_coefficients(species, upstream.rho, p.M);
    p.beta = dissipation.beta ? *dissipation.beta : dl.beta;
    p.sigma = dissipation.sigma ? *dissipation.sigma : dl.sigma;
    p.chi = dissipation.chi ? *dissipation.chi : dl.chi;

    if (derived_any) {
        // consistency: the species route and the (gamma, alpha12, rho) route
        // must agree to 1e-12 relative
        const double ge = p.gamma_e, gi = p.gamma_i;
        const double ratio = ge * gi / (gi - ge);
        const double sigma_alt = -(ratio * ratio) * upstream.rho * upstream.rho / p.alpha12;
        const double beta_alt = -1.0 / (ge * gi * p.M);
        const double chi_alt = (ge + gi) / (ge * gi * p.M);
        auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-30});
        };
        if (!dissipation.sigma && !close(p.sigma, sigma_alt))
            throw NumericError("config: derived sigma failed the consistency check");
        if (!dissipation.beta && !close(p.beta, beta_alt))
            throw NumericError("config: derived beta failed the consistency check");
        if (!dissipation.chi && !close(p.chi, chi_alt))
            throw NumericError("config: derived chi failed the consistency check");
    }

    p.validate();
    return p;
}

PlasmaState RunConfig::upstream_state() const {
    PlasmaState st;
    st.u = upstream.u;
    st.v = upstream.v;
    st.w = upstream.w;
    st.B2 = upstream.B2;
    st.B3 = upstream.B3;
    st.zeta2 = 0.0;
    st.zeta3 = 0.0;
    st.T = upstream.T;
    return st;
}

RestPointSearch RunConfig::make_search() const {
    RestPointSearch s;
    s.u_min = solver.u_min;
    s.u_max = solver.u_max;
    s.T_min = solver.T_min;
    s.T_max = solver.T_max;
    s.n_u = solver.seed_n_u;
    s.n_T = solver.seed_n_T;
    s.newton_tol = solver.rest_newton_tol;
    s.dedup_radius = solver.dedup_radius;
    s.threads = threads;
    s.extra_seeds.push_back(upstream_state());
    return s;
}

ProfileOptions RunConfig::make_profile_options() const {
    ProfileOptions o;
    o.shooting.launch_offset = solver.launch_offset;
    o.shooting.rtol = solver.rtol;
    o.shooting.atol = solver.atol;
    o.shooting.max_span = solver.max_span;
    o.shooting.capture_radius = solver.capture_radius;
    o.match_tol = solver.match_tol;
    o.eps_up = solver.eps_up;
    o.eps_down = solver.mismatch_tol;
    o.max_newton_iterations = solver.max_newton_iterations;
    o.multi_starts = solver.multi_starts;
    o.seed = seed;
    o.output_samples = outputs.samples;
    return o;
}

}  // namespace shocklayer
