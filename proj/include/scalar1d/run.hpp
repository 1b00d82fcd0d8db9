#pragma once

#include <string>

#include "scalar1d/config.hpp"

namespace scalar1d {

/// Exit codes shared by the CLI and the command implementations.
enum ExitCode {
    kExitOk = 0,
    kExitConfig = 2,
    kExitSmallness = 3,
    kExitIntegrator = 4,
    kExitVerifyFailed = 5,
};

struct RunOptions {
    std::string out_dir_override;   // empty = use config
    bool corrupt_self_force = false;  // test-only: +1% on the a^2/2 coefficient
};

int cmd_simulate(const RunConfig& config, const RunOptions& opts = {});
int cmd_verify(const RunConfig& config, const RunOptions& opts = {});
int cmd_snapshot(const RunConfig& config, const RunOptions& opts = {});
int cmd_sweep(const RunConfig& config, const RunOptions& opts = {});

}  // namespace scalar1d
