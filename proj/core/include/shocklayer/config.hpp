#ifndef SHOCKLAYER_CONFIG_HPP
#define SHOCKLAYER_CONFIG_HPP

// Run configuration: a JSON document with named sections.  Unknown keys are
// rejected with their JSON-pointer path; per-coefficient derived/explicit
// modes are mutually exclusive by construction (a number or "derived").

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shocklayer/jump.hpp"
#include "shocklayer/profile.hpp"
#include "shocklayer/state.hpp"
#include "shocklayer/twofluid.hpp"

namespace shocklayer {

enum class ModelKind { plasma, burgers };

struct UpstreamBlock {
    double rho = 1.0;
    double u = 2.0;
    double v = 0.0;
    double w = 0.0;
    double B1 = 0.0;
    double B2 = 0.0;
    double B3 = 0.0;
    double T = 0.6;
};

struct DissipationBlock {
    double eta = 1.0;
    double mu_visc = 1.0;
    double kappa = 1.0;
    std::optional<double> beta;   // empty: derived from species
    std::optional<double> sigma;
    std::optional<double> chi;
};

struct FieldsBlock {
    double mu_e = 1.0;
    double eps = 1.0;
    double E1 = 0.0;
};

struct RadiationBlock {
    double a_R = 0.0;
    double D_R = 0.0;
};

struct SolverBlock {
    double rest_newton_tol = 1e-10;
    double dedup_radius = 1e-8;
    int seed_n_u = 24;
    int seed_n_T = 24;
    double u_min = 0.0, u_max = 0.0;  // 0: automatic box
    double T_min = 0.0, T_max = 0.0;
    double rtol = 1e-10;
    double atol = 1e-12;
    double launch_offset = 1e-6;
    double capture_radius = 1e-8;
    double eps_up = 1e-8;
    double mismatch_tol = 1e-6;
    double residual_tol = 1e-6;
    double max_span = 1e4;
    double match_tol = 3e-10;
    int max_newton_iterations = 60;
    int multi_starts = 8;
    double frame_speed = 0.0;
};

struct SweepBlock {
    std::vector<double> multipliers{1.0, 0.5, 0.25, 0.125};
    double min_multiplier = 1e-4;
    double neighborhood_fraction = 0.5;
    double monotone_slack = 0.05;
    // nonempty: sweep this config key (dotted path) over `values` instead of
    // scaling the dissipation coefficients
    std::string parameter;
    std::vector<double> values;
};

struct OutputsBlock {
    int samples = 12001;
};

struct DiagnosticsBlock {
    std::vector<int> grids{64, 128, 256};
    int max_mode = 4;
    unsigned field_seed = 7;
    int joule_samples = 1000;
    double slope_tolerance = 0.2;
    std::vector<std::array<double, 3>> galilean_velocities;
};

struct BurgersBlock {
    double u_left = 1.0;
    double u_right = 0.0;
    double viscosity = 0.1;
};

struct RunConfig {
    ModelKind model = ModelKind::plasma;
    UpstreamBlock upstream;
    SpeciesSpec species;
    DissipationBlock dissipation;
    EosSpec eos;
    FieldsBlock fields;
    RadiationBlock radiation;
    double phi = 0.0;
    SolverBlock solver;
    SweepBlock sweep;
    OutputsBlock outputs;
    DiagnosticsBlock diagnostics;
    BurgersBlock burgers;
    unsigned seed = 0;
    int threads = 1;
    std::string raw_text;  // the document after overrides, for parameter sweeps

    // assembled model constants with derived coefficients resolved and the
    // derived-mode consistency check applied
    ModelParams make_params() const;
    double mass_flux() const { return upstream.rho * (upstream.u - solver.frame_speed); }
    PlasmaState upstream_state() const;
    RestPointSearch make_search() const;
    ProfileOptions make_profile_options() const;
};

// key=value overrides use dotted paths into the JSON document, e.g.
// solver.rtol=1e-8
using Overrides = std::vector<std::pair<std::string, std::string>>;

RunConfig load_config(const std::string& path, const Overrides& overrides = {});
RunConfig parse_config_text(const std::string& text, const Overrides& overrides = {});

}  // namespace shocklayer

#endif
