// shockprof: batch front end for plasma shock-structure computations.
//
//   shockprof restpoints --config cfg.json [--out DIR]
//   shockprof profile    --config cfg.json [--out DIR]
//   shockprof sweep      --config cfg.json [--out DIR]
//   shockprof check      --config cfg.json [--out DIR]
//
// Common flags: --seed N, --threads N, --tol-override KEY=VAL (repeatable).

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shocklayer/config.hpp"
#include "shocklayer/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    int seed = -1;
    int threads = 0;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "multi-start seed override");
    cmd->add_option("--threads", args.threads, "worker threads override");
    cmd->add_option("--tol-override", args.overrides,
                    "KEY=VAL override into the config document (repeatable)");
}

int load_and_run(const CommonArgs& args,
                 int (*runner)(const shocklayer::RunConfig&, const std::string&)) {
    shocklayer::Overrides overrides;
    for (const auto& kv : args.overrides) {
        const auto pos = kv.find('=');
        if (pos == std::string::npos) {
            std::cerr << "error: --tol-override expects KEY=VAL, got '" << kv << "'\n";
            return 1;
        }
        overrides.emplace_back(kv.substr(0, pos), kv.substr(pos + 1));
    }
    shocklayer::RunConfig cfg;
    try {
        cfg = shocklayer::load_config(args.config_path, overrides);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (args.seed >= 0) cfg.seed = static_cast<unsigned>(args.seed);
    if (args.threads > 0) cfg.threads = args.threads;
    return runner(cfg, args.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"viscous shock-structure solver for fully ionized two-fluid plasmas"};
    app.require_subcommand(1);

    CommonArgs rp_args, prof_args, sweep_args, check_args;
    CLI::App* rp = app.add_subcommand("restpoints", "find and classify all rest points");
    add_common(rp, rp_args);
    CLI::App* prof = app.add_subcommand("profile", "compute the viscous shock profile");
    add_common(prof, prof_args);
    CLI::App* sweep = app.add_subcommand("sweep", "dissipation-scaling (Germain) sweep");
    add_common(sweep, sweep_args);
    CLI::App* check = app.add_subcommand("check", "run the diagnostics suites");
    add_common(check, check_args);

    CLI11_PARSE(app, argc, argv);

    if (rp->parsed()) return load_and_run(rp_args, shocklayer::cmd_restpoints);
    if (prof->parsed()) return load_and_run(prof_args, shocklayer::cmd_profile);
    if (sweep->parsed()) return load_and_run(sweep_args, shocklayer::cmd_sweep);
    if (check->parsed()) return load_and_run(check_args, shocklayer::cmd_check);
    return 1;
}
