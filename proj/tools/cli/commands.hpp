#pragma once

// Subcommands of the cmaeig tool. Each returns the process exit code:
// 0 when every check passes, 1 on a verification failure, 2 on usage or
// configuration errors.

#include <optional>
#include <string>

#include "cli/config.hpp"
#include "cmaeig/algebra/catalog.hpp"

namespace cmaeig::cli {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int cmd_verify_algebra(const RunConfig& cfg, algebra::Mutation mutation = algebra::Mutation::none);
int cmd_solve_ball(const RunConfig& cfg);
int cmd_solve_domain(const RunConfig& cfg);
int cmd_deform(const RunConfig& cfg);
int cmd_check_derivatives(const RunConfig& cfg);

// Parses argv, dispatches and maps exceptions to exit codes.
int run_cli(int argc, char** argv);

}  // namespace cmaeig::cli
