// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. `tools/selrel` is a thin wrapper around run_cli so
// the whole command surface can be driven from tests.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace selrel {

/// Exit code for flag or config errors (unknown flag, bad value, missing file argument).
inline constexpr int kExitUsage = 2;
/// Exit code when a pipeline stage fails; the diagnostic names the stage.
inline constexpr int kExitStage = 1;

/**
 * @brief Runs one subcommand: explain, select, sweep, flow, eval, bench, render,
 * logits.
 *
 * `args` excludes the program name. `--config FILE` supplies defaults as
 * key=value lines (key = long flag name); flags given on the command line win.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace selrel

namespace selrel {

/**
 * @brief Seeded fixture generator: `weights` (random SRWB for a preset or
 * architecture file), `frames` (moving-square PNG sequence) and `volume`
 * (uniform random SRVL). Same exit codes as run_cli.
 */
int run_fixture_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace selrel
