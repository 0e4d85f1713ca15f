#ifndef SHOCKLAYER_RUNNER_HPP
#define SHOCKLAYER_RUNNER_HPP

// Batch command implementations behind the CLI.  Exit-code contract:
//   0 success, 1 config error, 2 numeric failure, 3 no downstream state,
//   4 no viscous profile (no heteroclinic connection).

#include <string>

#include "shocklayer/config.hpp"

namespace shocklayer {

int cmd_restpoints(const RunConfig& config, const std::string& out_dir);
int cmd_profile(const RunConfig& config, const std::string& out_dir);
int cmd_sweep(const RunConfig& config, const std::string& out_dir);
int cmd_check(const RunConfig& config, const std::string& out_dir);

}  // namespace shocklayer

#endif
