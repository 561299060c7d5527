// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nvcavity/report.hpp"

namespace nvcavity::pipeline {

/// One CLI invocation: subcommand, its positional arguments, and the global
/// options. `seed_override` takes precedence over any configured seed.
struct CommandRequest {
  std::string command;
  std::vector<std::string> args;
  std::string config_path;  // empty: start from an empty config
  std::string output_dir = ".";
  report::Format format = report::Format::Text;
  std::optional<std::uint64_t> seed_override;
};

struct CommandResult {
  std::string report;
  int exit_code = 0;  // 0 success, 3 when a fit did not converge
};

/// Known subcommands: simulate, fit, rates, spectrum, purcell, collect, snr,
/// mc, tune.
std::vector<std::string> command_names();

/// Validates the configuration, runs the subcommand, and renders its report.
/// Hard failures (validation, parse, I/O) are thrown as nvcavity::Error;
/// non-converged fits produce a report plus exit code 3.
CommandResult run_command(const CommandRequest& request);

}  // namespace nvcavity::pipeline
