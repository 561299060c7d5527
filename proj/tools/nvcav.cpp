// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
//
// nvcav: command-line front end for the nvcavity shared library. All work
// happens behind the C API; this file only parses arguments and prints the
// rendered report.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nvcavity/nvcavity.h"

int main(int argc, char** argv) {
  CLI::App app{
      "NV-center spin-readout toolkit: five-level rate-model simulation, "
      "measurement fitting, cavity analytics and SNR estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("nvcav ") + nvc_version());

  std::string config_path;
  std::string output_dir = ".";
  std::string format = "text";
  long long seed_override = -1;
  app.add_option("--config", config_path, "Configuration file")
      ->envname("NVCAV_CONFIG");
  app.add_option("--output", output_dir, "Directory for generated CSV files");
  app.add_option("--seed", seed_override, "Override the configured RNG seed");
  app.add_option("--format", format, "Report format: text or csv")
      ->check(CLI::IsMember({"text", "csv"}));

  struct Sub {
    const char* name;
    const char* help;
    int min_args;
    int max_args;
    const char* arg_help;
  };
  const Sub subs[] = {
      {"simulate", "Rate-model fluorescence traces and contrast", 0, 0, ""},
      {"fit", "Fit a curve model to a data file", 2, 2, "MODEL FILE"},
      {"rates", "Extract k_0/k_s/k_m from two prepared-state traces", 0, 2,
       "[TRACE_MS0 TRACE_MS1]"},
      {"spectrum", "Q-factor, beta* and Purcell factor from a spectrum", 0, 1,
       "[FILE]"},
      {"purcell", "Effective-Q Purcell prediction from cavity parameters", 0,
       0, ""},
      {"collect", "Dipole-weighted collection efficiencies", 0, 1, "[TABLE]"},
      {"snr", "Readout-SNR enhancement for the configured scenario", 0, 0, ""},
      {"mc", "Monte Carlo photon-statistics validation", 0, 0, ""},
      {"tune", "Mode-tuning schedule toward a target wavelength", 0, 0, ""},
  };

  std::string chosen;
  std::vector<std::string> args;
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    if (sub.max_args > 0)
      cmd->add_option("args", args, sub.arg_help)
          ->expected(sub.min_args, sub.max_args);
    cmd->callback([&chosen, name = std::string(sub.name)] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);

  std::vector<const char*> argv_c;
  argv_c.reserve(args.size());
  for (const std::string& a : args) argv_c.push_back(a.c_str());

  char* report = nullptr;
  const nvc_status status = nvc_run_command(
      config_path.empty() ? nullptr : config_path.c_str(), chosen.c_str(),
      static_cast<int>(argv_c.size()), argv_c.data(), output_dir.c_str(),
      format.c_str(), seed_override, &report);

  if (report != nullptr) {
    std::fputs(report, stdout);
    nvc_string_free(report);
  }
  if (status != NVC_OK && report == nullptr)
    std::fprintf(stderr, "nvcav %s: error: %s\n", chosen.c_str(),
                 nvc_last_error_message());
  return static_cast<int>(status);
}
