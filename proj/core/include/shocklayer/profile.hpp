#ifndef SHOCKLAYER_PROFILE_HPP
#define SHOCKLAYER_PROFILE_HPP

// Heteroclinic-orbit computation: the viscous profile connecting the upstream
// and downstream rest points.  A single forward shot from the upstream
// unstable manifold (shoot) initializes a two-sided match: a backward segment
// launched on the downstream stable manifold is joined to the forward segment
// mid-layer by damped Gauss-Newton over the manifold coefficients and the
// backward span.  Downstream points with no unstable directions are reached
// by plain forward capture.

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shocklayer/jumpdata.hpp"
#include "shocklayer/layer.hpp"
#include "shocklayer/ode.hpp"
#include "shocklayer/types.hpp"

namespace shocklayer {

// Rest point of a generic autonomous system with its eigen-structure.
struct FixedPoint {
    Vec y;
    Mat jacobian;
    std::vector<std::complex<double>> eigenvalues;
    Eigen::MatrixXcd eigenvectors;
    int n_unstable = 0;
    int n_stable = 0;
    int n_center = 0;
};

FixedPoint classify_fixed_point(const OdeSystemBase& sys, const Vec& y);
FixedPoint to_fixed_point(const RestPoint& rp);

// Per-component scales max(|up_i - down_i|, floor); all profile distances are
// measured in these units.
struct WeightedNorm {
    Vec scale;
    static WeightedNorm between(const Vec& a, const Vec& b, double floor = 1e-3);
    double distance(const Vec& a, const Vec& b) const;
    double norm(const Vec& d) const;
};

// Orthonormal real basis of the unstable (Re lambda > threshold) or stable
// (Re lambda < -threshold) invariant subspace; complex pairs contribute their
// real and imaginary parts.
Mat unstable_basis(const FixedPoint& point);
Mat stable_basis(const FixedPoint& point);

struct ShootingSpec {
    double launch_offset = 1e-6;   // distance along the unstable subspace (weighted units)
    Vec manifold_coeffs;           // coordinates in the unstable eigenbasis; empty: automatic
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_span = 2000.0;      // integration length cap
    long max_steps = 300000;       // integration step budget
    double capture_radius = 1e-8;  // stop when this close to downstream (weighted)
    double blow_radius = 1e3;      // stop when this far from both endpoints (weighted)
};

enum class ShotStatus { captured, section_crossed, span_exceeded, blow_up, stiffness_failure };

const char* to_string(ShotStatus s);

struct ShotResult {
    ShotStatus status = ShotStatus::span_exceeded;
    double mismatch = 0.0;      // weighted distance to downstream at the stop point
    double min_distance = 0.0;  // smallest distance seen along the shot
    double x_at_min = 0.0;
    OdeSolution solution;
};

// Single forward integration from upstream + launch_offset * (unit combination
// of unstable basis vectors) until capture, blow-up, or span exhaustion.
ShotResult shoot(const ShootingSpec& spec, const OdeSystemBase& sys, const FixedPoint& upstream,
                 const FixedPoint& downstream);

// A sampled heteroclinic orbit.
struct Profile {
    std::vector<double> x;      // strictly increasing
    std::vector<Vec> samples;
    FixedPoint upstream;
    FixedPoint downstream;
    double mismatch = 0.0;              // terminal weighted distance to downstream
    double upstream_distance = 0.0;     // first-sample weighted distance to upstream
    double width = 0.0;                 // central-80% traversal interval of component 0
    std::vector<double> conservation_residuals;  // filled by the diagnostics pass

    // convergence metadata
    int newton_iterations = 0;
    long rhs_evaluations = 0;
    int starts_tried = 0;

    PlasmaState state_at(std::size_t i) const { return PlasmaState::from_vector(samples.at(i)); }
};

// Warm start for continuation: launch state, total span, and node states on
// the uniform multiple-shooting partition of [0, X].
struct ProfileWarmStart {
    Vec launch_state;
    double span = 0.0;
    std::vector<Vec> node_states;
};

struct ProfileOptions {
    ShootingSpec shooting;
    double match_tol = 2e-9;      // multiple-shooting residual target
    double eps_up = 1e-8;         // endpoint invariants
    double eps_down = 1e-6;
    int max_newton_iterations = 60;
    int multi_starts = 8;
    unsigned seed = 0;
    int output_samples = 12001;
    std::optional<ProfileWarmStart> warm_start;
    bool allow_fresh_init = true;  // continuation stages live off the warm start
};

struct ProfileResult {
    bool connected = false;
    Profile profile;             // best effort; valid orbit only when connected
    double best_mismatch = 0.0;
    int starts_tried = 0;
    std::string failure;         // empty when connected
    std::optional<ProfileWarmStart> warm_start;  // filled on success
};

ProfileResult find_profile(const OdeSystemBase& sys, const FixedPoint& upstream,
                           const FixedPoint& downstream, const ProfileOptions& opts = {});

// Plasma-facing convenience.
ProfileResult find_profile(const LayerSystem& sys, const JumpPair& pair,
                           const ProfileOptions& opts = {});

struct GermainPoint {
    double multiplier = 1.0;
    bool connected = false;
    double width = 0.0;
    double sup_distance = 0.0;  // max deviation from the limiting step outside the neighborhood
};

struct GermainReport {
    std::vector<GermainPoint> points;
    bool germain_stable = false;
    double neighborhood = 0.0;   // half-width excluded around the jump
    std::string verdict;
};

struct GermainOptions {
    ProfileOptions profile;
    double neighborhood_fraction = 0.5;  // of the base-profile width
    double min_multiplier = 1e-4;
    double monotone_slack = 0.05;
};

// Rescales all dissipation coefficients by each multiplier (continuation with
// warm starts), reporting width(t) and the sup-distance to the limiting step.
GermainReport germain_sweep(const OdeSystemBase& sys, const FixedPoint& upstream,
                            const FixedPoint& downstream, const std::vector<double>& scale_grid,
                            const GermainOptions& opts = {});

GermainReport germain_sweep(const LayerSystem& sys, const JumpPair& pair,
                            const std::vector<double>& scale_grid,
                            const GermainOptions& opts = {});

// Width of the interval over which component `comp` traverses the central 80%
// of [downstream, upstream] values (0 for zero-strength profiles).
double profile_width(const std::vector<double>& x, const std::vector<Vec>& samples, double up_val,
                     double down_val, int comp = 0);

}  // namespace shocklayer

#endif
