#ifndef SHOCKLAYER_PIPELINE_HPP
#define SHOCKLAYER_PIPELINE_HPP

// End-to-end shock solve: constants from the upstream state, rest-point
// search, downstream selection, and the viscous profile.  Magnetized cases
// that the direct solve misses are reached by continuation in the upstream
// transverse-field strength, warm-starting the profile solver from the
// embedded gas-dynamic orbit.

#include "shocklayer/jump.hpp"
#include "shocklayer/profile.hpp"

namespace shocklayer {

struct ShockSolution {
    FluxConstants constants;
    RestPointReport roots;
    JumpPair pair;
    ProfileResult profile;
    int continuation_steps = 0;  // 0: direct solve
};

// Throws NoDownstreamError when only the upstream root exists.
ShockSolution solve_shock_profile(const ModelParams& base, const EosSpec& eos,
                                  const PlasmaState& upstream, const RestPointSearch& search,
                                  const ProfileOptions& popts);

// Downstream pick: the farthest distinct root from the given reference, or
// (when previous is supplied) the root nearest the previous downstream.
const RestPoint* pick_downstream(const RestPointReport& report, const PlasmaState& upstream,
                                 const PlasmaState* previous = nullptr);

}  // namespace shocklayer

#endif
