#ifndef SHOCKLAYER_JUMP_HPP
#define SHOCKLAYER_JUMP_HPP

// Rankine-Hugoniot machinery: flux constants from an upstream equilibrium,
// multi-start damped Newton search for all rest points of the algebraic
// system, and eigen-classification of the layer Jacobian at each root.

#include <optional>
#include <vector>

#include "shocklayer/jumpdata.hpp"
#include "shocklayer/state.hpp"
#include "shocklayer/types.hpp"

namespace shocklayer {

class LayerSystem;

// Evaluates the first integrals at a quiescent upstream state (zeta = 0) and
// the rest-point form of the zeta equations:
//   E3 = -(u B2 - v B1),  E2 = (u B3 - w B1).
// params.M must already hold the mass flux rho_upstream * (u - frame_speed).
FluxConstants constants_from_upstream(const PlasmaState& upstream, const ModelParams& params,
                                      const EosSpec& eos);

struct RestPointSearch {
    double u_min = 0.0, u_max = 0.0;  // 0,0: automatic box around the upstream
    double T_min = 0.0, T_max = 0.0;
    int n_u = 24;
    int n_T = 24;
    bool transverse_sign_seeds = true;  // extra sign choices on (B2, B3)
    double newton_tol = 1e-10;          // residual max-norm at acceptance
    double dedup_radius = 1e-8;         // weighted state-space distance
    int max_iterations = 80;
    int threads = 1;
    std::vector<PlasmaState> extra_seeds;  // e.g. the upstream state itself
};

struct RestPointReport {
    std::vector<RestPoint> roots;  // sorted by (u, T); upstream always present
    int seeds_tried = 0;
    int seeds_converged = 0;
};

// All roots of the 6-variable rest-point system (u, v, w, B2, B3, T) found by
// multi-start damped Newton over the seed grid, deduplicated and classified.
RestPointReport find_rest_points(const FluxConstants& constants, const ModelParams& params,
                                 const EosSpec& eos, const RestPointSearch& search = {});

// Eigen-classification of the full layer Jacobian at a rest point; the center
// threshold is 1e-8 times the spectral radius.
RestPoint classify_rest_point(const PlasmaState& point, const ModelParams& params,
                              const EosSpec& eos);

// Residual vector of the 6-variable rest-point system at a (zeta = 0) state.
Eigen::Matrix<double, 6, 1> rest_point_residual(const PlasmaState& point,
                                                const ModelParams& params, const EosSpec& eos);

// Convenience: classify upstream and a chosen downstream root into a JumpPair.
JumpPair make_jump_pair(const RestPoint& upstream, const RestPoint& downstream,
                        const FluxConstants& constants);

}  // namespace shocklayer

#endif
