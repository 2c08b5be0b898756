// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_TOOLS_COMMANDS_HPP
#define LYAPKIT_TOOLS_COMMANDS_HPP

#include "run_config.hpp"

namespace lyapkit::cli
{

// Each command writes its artifacts below config.out_dir and returns an ExitCode. Library
// errors propagate; run_command maps them to EXIT_OPERATIONAL.
int cmd_solve_adi(const RunConfig &config);
int cmd_solve_rksm(const RunConfig &config);
int cmd_pork(const RunConfig &config);
int cmd_verify_h2(const RunConfig &config);
int cmd_angle(const RunConfig &config);
int cmd_irka(const RunConfig &config);
int cmd_experiment(const RunConfig &config);

// Dispatches on config.command and reports failures on stderr.
int run_command(const RunConfig &config);

}  // namespace lyapkit::cli

#endif  // LYAPKIT_TOOLS_COMMANDS_HPP
