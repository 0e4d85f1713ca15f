#ifndef SHOCKLAYER_DIAGNOSTICS_HPP
#define SHOCKLAYER_DIAGNOSTICS_HPP

// Independent verification oracles: first-integral residuals along sampled
// profiles (finite differences, no shared code path with the layer rhs),
// electromagnetic-stress divergence identities on synthetic fields, and the
// Galilean frame-shift check.

#include <array>
#include <functional>
#include <vector>

#include "shocklayer/jump.hpp"
#include "shocklayer/profile.hpp"
#include "shocklayer/state.hpp"
#include "shocklayer/types.hpp"

namespace shocklayer {

struct ResidualReport {
    // max relative deviation per constant (M slot measures rho*u_rel vs M)
    std::array<double, 5> max_deviation{};      // order: M, P, P2*, P3*, C
    std::vector<double> per_sample_worst;       // worst constant deviation per sample
    double worst = 0.0;
    double tolerance = 1e-6;
    bool pass = false;
};

// Reconstructs derivatives from the samples by second-order finite differences
// (central interior, one-sided ends) and evaluates the five first integrals.
ResidualReport conservation_residuals(const Profile& profile, const LayerSystem& sys,
                                      double tolerance = 1e-6);

// Synthetic 1-D static fields for the electromagnetic identities.  Consistency
// with the static Maxwell equations requires E2, E3, B1 constant; E1(x),
// B2(x), B3(x) free and periodic on [0, 1).  The analytic x-derivatives feed
// the Maxwell sources (J, rho_e); the divergence sides are differenced.
struct SyntheticFields {
    std::vector<double> x;                       // uniform, periodic grid
    std::vector<Vec3> E;
    std::vector<Vec3> B;
    std::vector<Vec3> dE;                        // analytic d/dx
    std::vector<Vec3> dB;
};

// Band-limited random fields with fixed seed (modes <= max_mode).
SyntheticFields band_limited_fields(int n, int max_mode, unsigned seed);

struct LorentzCheckResult {
    double max_error_momentum = 0.0;  // force-balance identity, max over components/grid
    double max_error_poynting = 0.0;  // E.J identity
};

// Evaluates both sides of the divergence identities by finite differences on
// the periodic grid and returns the max componentwise error.
LorentzCheckResult lorentz_divergence_check(const SyntheticFields& fields,
                                            const ModelParams& params);

struct GalileanCheckOptions {
    ProfileOptions profile;
    RestPointSearch search;
    int compare_samples = 2001;
};

struct GalileanCheckResult {
    double max_discrepancy = 0.0;   // sup-norm over compared components after the shift
    double base_mismatch = 0.0;
    double shifted_mismatch = 0.0;
};

// Builds the frame-shifted problem (velocities shifted by V, E' = E + V x B,
// constants recomputed from the shifted upstream, frame speed -V_x), computes
// profiles in both frames, and compares after undoing the shift and aligning
// midpoints.  Axial shifts require uniform transverse field and no radiation.
GalileanCheckResult galilean_check(const LayerSystem& sys, const PlasmaState& upstream,
                                   const Vec3& V, const GalileanCheckOptions& opts = {});

}  // namespace shocklayer

#endif
