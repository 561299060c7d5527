// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/pipeline.hpp"

#include <algorithm>
#include <filesystem>

#include "nvcavity/cavity.hpp"
#include "nvcavity/collection.hpp"
#include "nvcavity/config.hpp"
#include "nvcavity/csvio.hpp"
#include "nvcavity/errors.hpp"
#include "nvcavity/fitkit.hpp"
#include "nvcavity/levels.hpp"
#include "nvcavity/snr.hpp"

namespace nvcavity::pipeline {

namespace {

using config::RunConfig;
using report::Report;

struct Sourced {
  double value;
  const char* source;
};

Sourced pick(const RunConfig& cfg, const std::string& section,
             const std::string& key, double fallback) {
  if (cfg.has_key(section, key)) return {cfg.get_double(section, key), "config"};
  return {fallback, "default"};
}

levels::RateSet rates_from_config(const RunConfig& cfg) {
  require(cfg.has_section("rates"), ErrorCode::InvariantViolation,
          "missing config section [rates]");
  levels::RateSet rates;
  rates.k_e = cfg.get_double("rates", "k_e");
  rates.k_f = cfg.get_double("rates", "k_f");
  rates.k_s = cfg.get_double("rates", "k_s");
  rates.k_0 = cfg.get_double("rates", "k_0");
  rates.k_m = cfg.get_double("rates", "k_m");
  const std::string variant =
      cfg.get_string_or("rates", "mixing_variant", "radiative");
  if (variant == "radiative") {
    rates.mixing = levels::MixingVariant::RadiativeMixing;
  } else if (variant == "nonradiative_excited") {
    rates.mixing = levels::MixingVariant::NonRadiativeExcitedMixing;
  } else {
    fail(ErrorCode::ParseError,
         "[rates].mixing_variant must be 'radiative' or 'nonradiative_excited'");
  }
  rates.validate();
  return rates;
}

levels::InitMode init_from_config(const RunConfig& cfg) {
  const std::string kind = cfg.get_string_or("simulate", "init", "ideal");
  if (kind == "ideal") return levels::InitMode::ideal();
  if (kind == "polarized")
    return levels::InitMode::polarized(
        cfg.get_double_or("simulate", "polarized_p", 0.8));
  if (kind == "pumped")
    return levels::InitMode::pumped(
        cfg.get_double_or("simulate", "pump_duration_us", 2.0),
        cfg.get_double_or("simulate", "dark_wait_us", 1.0));
  fail(ErrorCode::ParseError,
       "[simulate].init must be 'ideal', 'polarized' or 'pumped'");
}

void add_fit(Report& rep, const fitkit::FitResult& fit, const std::string& unit,
             const std::string& prefix = "") {
  for (const auto& [name, value] : fit.params) {
    rep.add(prefix + name, value, unit, "computed");
    const auto err = fit.stderrs.find(name);
    if (err != fit.stderrs.end())
      rep.add(prefix + name + "_stderr", err->second, unit, "computed");
  }
  rep.add(prefix + "residual_norm", fit.residual_norm, "dimensionless",
          "computed");
  rep.add_int(prefix + "iterations", fit.iterations, "dimensionless",
              "computed");
  rep.add_text(prefix + "converged", fit.converged ? "true" : "false",
               "computed");
}

std::string data_path(const RunConfig& cfg, const CommandRequest& req,
                      std::size_t arg_index, const std::string& files_key) {
  if (req.args.size() > arg_index) return req.args[arg_index];
  require(cfg.has_key("files", files_key), ErrorCode::InvariantViolation,
          "missing config key [files]." + files_key + " (or a path argument)");
  return cfg.get_path("files", files_key);
}

CommandResult cmd_simulate(const RunConfig& cfg, const CommandRequest& req) {
  const levels::RateSet rates = rates_from_config(cfg);
  const levels::InitMode init = init_from_config(cfg);
  const double duration = cfg.get_double_or("simulate", "duration_ns", 3000.0);
  const double step = cfg.get_double_or("simulate", "step_ns", 10.0);
  const bool mixing_photons =
      cfg.get_bool_or("simulate", "include_mixing_photons", false);

  const levels::TimeTrace trace0 = levels::readout_trace(
      rates, levels::Prep::Ms0, init, duration, step, mixing_photons);
  const levels::TimeTrace trace1 = levels::readout_trace(
      rates, levels::Prep::Ms1, init, duration, step, mixing_photons);
  const levels::LevelPopulations steady = levels::steady_state(rates);
  const double norm = levels::fluorescence_rate(steady, rates, mixing_photons);
  const levels::TimeTrace contrast = levels::contrast_trace(trace0, trace1, norm);

  std::filesystem::create_directories(req.output_dir);
  const auto out = [&](const std::string& name) {
    return (std::filesystem::path(req.output_dir) / name).string();
  };
  csvio::save_trace(trace0, out("trace_ms0.csv"));
  csvio::save_trace(trace1, out("trace_ms1.csv"));
  csvio::save_trace(contrast, out("contrast.csv"));

  double peak = 0.0, peak_time = 0.0;
  for (std::size_t i = 0; i < contrast.size(); ++i) {
    if (contrast.values[i] > peak) {
      peak = contrast.values[i];
      peak_time = contrast.times_ns[i];
    }
  }

  Report rep("simulate");
  rep.add("duration", duration, "ns",
          cfg.has_key("simulate", "duration_ns") ? "config" : "default");
  rep.add("step", step, "ns",
          cfg.has_key("simulate", "step_ns") ? "config" : "default");
  rep.add("steady_state_fluorescence", norm, "MHz", "computed");
  rep.add("final_ms0", trace0.values.back(), "MHz", "computed");
  rep.add("final_ms1", trace1.values.back(), "MHz", "computed");
  rep.add("final_relative_difference",
          std::abs(trace0.values.back() - trace1.values.back()) /
              trace0.values.back(),
          "dimensionless", "computed");
  rep.add("peak_contrast", peak, "dimensionless", "computed");
  rep.add("peak_contrast_time", peak_time, "ns", "computed");
  if (cfg.has_section("gate")) {
    const double start = cfg.get_double_or("gate", "start_ns", 0.0);
    const double width = cfg.get_double_or("gate", "width_ns", 250.0);
    rep.add("gated_contrast",
            levels::gated_contrast(rates, init, start, width, mixing_photons),
            "dimensionless", "computed");
  }
  rep.add_text("trace_ms0_file", out("trace_ms0.csv"), "computed");
  rep.add_text("trace_ms1_file", out("trace_ms1.csv"), "computed");
  rep.add_text("contrast_file", out("contrast.csv"), "computed");
  return {rep.render(req.format), 0};
}

CommandResult cmd_fit(const RunConfig& cfg, const CommandRequest& req) {
  require(req.args.size() == 2, ErrorCode::InvalidInput,
          "usage: fit <model> <data.csv>");
  const std::string& model = req.args[0];
  const std::string& path = req.args[1];
  (void)cfg;

  fitkit::FitResult fit;
  std::string unit;
  if (model == "lorentzian" || model == "gaussian" || model == "gaussian2" ||
      model == "odmr") {
    const fitkit::Spectrum s = csvio::load_spectrum(path);
    unit = s.unit == fitkit::Spectrum::Unit::Gigahertz ? "GHz-domain" : "nm-domain";
    if (model == "lorentzian") fit = fitkit::fit_lorentzian(s);
    else if (model == "gaussian") fit = fitkit::fit_gaussian(s);
    else if (model == "gaussian2") fit = fitkit::fit_two_gaussians(s);
    else fit = fitkit::fit_odmr(s);
  } else if (model == "rabi") {
    fit = fitkit::fit_rabi(csvio::load_trace(path));
    unit = "ns-domain";
  } else if (model == "double_exp") {
    fit = fitkit::fit_double_exponential(csvio::load_trace(path));
    unit = "ns-domain";
  } else if (model == "saturation") {
    fit = fitkit::fit_saturation(csvio::load_saturation(path));
    unit = "mW/kHz-domain";
  } else {
    fail(ErrorCode::InvalidInput, "unknown fit model '" + model + "'");
  }

  Report rep("fit");
  rep.add_text("model", model, "args");
  rep.add_text("data", path, "args");
  add_fit(rep, fit, unit);
  return {rep.render(req.format), fit.converged ? 0 : 3};
}

CommandResult cmd_rates(const RunConfig& cfg, const CommandRequest& req) {
  const levels::TimeTrace trace0 =
      csvio::load_trace(data_path(cfg, req, 0, "trace_ms0"));
  const levels::TimeTrace trace1 =
      csvio::load_trace(data_path(cfg, req, 1, "trace_ms1"));
  require(cfg.has_key("rates", "k_f"), ErrorCode::InvariantViolation,
          "missing config key [rates].k_f");
  const double k_f = cfg.get_double("rates", "k_f");

  const fitkit::VariantComparison cmp =
      fitkit::compare_mixing_variants(trace0, trace1, k_f);

  Report rep("rates");
  rep.add("k_f_fixed", k_f, "MHz", "config");
  add_fit(rep, cmp.radiative, "MHz", "radiative_");
  add_fit(rep, cmp.nonradiative, "MHz", "nonradiative_");
  rep.add_text("preferred_variant",
               cmp.radiative_preferred() ? "radiative" : "nonradiative_excited",
               "computed");
  const bool ok = cmp.radiative.converged && cmp.nonradiative.converged;
  return {rep.render(req.format), ok ? 0 : 3};
}

CommandResult cmd_spectrum(const RunConfig& cfg, const CommandRequest& req) {
  const fitkit::Spectrum s =
      csvio::load_spectrum(data_path(cfg, req, 0, "spectrum"));
  const cavity::ModeFit mode = cavity::analyze_mode_spectrum(s);
  const double q = cavity::q_factor(mode.center_nm, mode.fwhm_nm);
  const double beta = cavity::beta_from_spectrum(mode);
  const double f_star = cavity::purcell_from_beta(beta);

  Report rep("spectrum");
  rep.add("mode_center", mode.center_nm, "nm", "computed");
  rep.add("mode_fwhm", mode.fwhm_nm, "nm", "computed");
  rep.add("q_factor", q, "dimensionless", "computed");
  rep.add("area_mode", mode.area_mode, "a.u.", "computed");
  rep.add("area_total", mode.area_total, "a.u.", "computed");
  rep.add("beta_star", beta, "dimensionless", "computed");
  rep.add("purcell_f_star", f_star, "dimensionless", "computed");
  rep.add("total_purcell_factor", 1.0 + f_star, "dimensionless", "computed");
  return {rep.render(req.format), 0};
}

CommandResult cmd_purcell(const RunConfig& cfg, const CommandRequest& req) {
  require(cfg.has_section("cavity"), ErrorCode::InvariantViolation,
          "missing config section [cavity]");
  cavity::CavityParams params;
  params.q_factor = cfg.get_double("cavity", "q_factor");
  params.mode_volume = cfg.get_double("cavity", "mode_volume");
  params.wavelength_nm = cfg.get_double("cavity", "wavelength_nm");
  const Sourced index = pick(cfg, "cavity", "refractive_index", 2.4);
  params.refractive_index = index.value;
  params.emitter_fwhm_ghz = cfg.get_double("cavity", "emitter_fwhm_ghz");
  params.zpl_fraction = cfg.get_double("cavity", "zpl_fraction");
  const cavity::PurcellPrediction prediction = cavity::predict_purcell(params);

  Report rep("purcell");
  rep.add("q_cavity", params.q_factor, "dimensionless", "config");
  rep.add("mode_volume", params.mode_volume, "(lambda/n)^3", "config");
  rep.add("wavelength", params.wavelength_nm, "nm", "config");
  rep.add("refractive_index", params.refractive_index, "dimensionless",
          index.source);
  rep.add("emitter_fwhm", params.emitter_fwhm_ghz, "GHz", "config");
  rep.add("zpl_fraction", params.zpl_fraction, "dimensionless", "config");
  rep.add("q_emitter", prediction.q_emitter, "dimensionless", "computed");
  rep.add("q_effective", prediction.q_effective, "dimensionless", "computed");
  rep.add("f_zpl", prediction.f_zpl, "dimensionless", "computed");
  rep.add("total_purcell_factor", prediction.total_factor, "dimensionless",
          "computed");
  return {rep.render(req.format), 0};
}

CommandResult cmd_collect(const RunConfig& cfg, const CommandRequest& req) {
  require(cfg.has_section("dipole"), ErrorCode::InvariantViolation,
          "missing config section [dipole]");
  collection::DipoleWeights weights;
  weights.k_x = cfg.get_double("dipole", "k_x");
  weights.k_y = cfg.get_double("dipole", "k_y");
  weights.k_z = cfg.get_double("dipole", "k_z");
  const Sourced fx = pick(cfg, "dipole", "purcell_x", 1.0);
  const Sourced fy = pick(cfg, "dipole", "purcell_y", 1.0);
  const Sourced fz = pick(cfg, "dipole", "purcell_z", 1.0);
  const Sourced gamma = pick(cfg, "dipole", "gamma_mhz", 1.0);

  const collection::EfficiencyTable table = csvio::load_efficiency_table(
      data_path(cfg, req, 0, "efficiency_table"));
  const Sourced off = pick(cfg, "collect", "wavelength_off_nm", 634.0);
  const Sourced on = pick(cfg, "collect", "wavelength_on_nm", 637.4);

  const collection::Axis3 rates = collection::effective_rates(
      gamma.value, weights, {fx.value, fy.value, fz.value});
  const collection::Axis3 fractions = collection::emission_fractions(rates);
  const double eff_off = collection::combined_efficiency(table, fractions, off.value);
  const double eff_on = collection::combined_efficiency(table, fractions, on.value);

  Report rep("collect");
  rep.add("gamma", gamma.value, "MHz", gamma.source);
  rep.add("purcell_x", fx.value, "dimensionless", fx.source);
  rep.add("purcell_y", fy.value, "dimensionless", fy.source);
  rep.add("purcell_z", fz.value, "dimensionless", fz.source);
  rep.add("rate_x", rates.x, "MHz", "computed");
  rep.add("rate_y", rates.y, "MHz", "computed");
  rep.add("rate_z", rates.z, "MHz", "computed");
  rep.add("fraction_x", fractions.x, "dimensionless", "computed");
  rep.add("fraction_y", fractions.y, "dimensionless", "computed");
  rep.add("fraction_z", fractions.z, "dimensionless", "computed");
  rep.add("wavelength_off", off.value, "nm", off.source);
  rep.add("wavelength_on", on.value, "nm", on.source);
  rep.add("efficiency_off", eff_off, "dimensionless", "computed");
  rep.add("efficiency_on", eff_on, "dimensionless", "computed");
  rep.add("collection_factor", eff_on / eff_off, "dimensionless", "computed");
  return {rep.render(req.format), 0};
}

CommandResult cmd_snr(const RunConfig& cfg, const CommandRequest& req) {
  const Sourced lifetime = pick(cfg, "scenario", "lifetime_factor", 1.13);
  const Sourced coll_zpl = pick(cfg, "scenario", "collection_factor_zpl", 0.87);
  const Sourced coll_bb =
      pick(cfg, "scenario", "collection_factor_broadband", 0.97);
  const Sourced zpl_off = pick(cfg, "scenario", "zpl_fraction_off", 0.021);
  const Sourced zpl_on = pick(cfg, "scenario", "zpl_fraction_on", 0.183);
  const Sourced contrast_ratio = pick(cfg, "scenario", "contrast_ratio", 0.959);
  const Sourced n0_ref = pick(cfg, "scenario", "n0_reference", 100.0);
  const Sourced c_ref = pick(cfg, "scenario", "contrast_reference", 0.042);

  collection::ReadoutScenario zpl;
  zpl.lifetime_factor = lifetime.value;
  zpl.collection_factor = coll_zpl.value;
  zpl.zpl_fraction_off = zpl_off.value;
  zpl.zpl_fraction_on = zpl_on.value;
  zpl.contrast_ratio = contrast_ratio.value;
  zpl.mode = collection::ReadoutMode::ZplOnly;

  collection::ReadoutScenario broadband = zpl;
  broadband.collection_factor = coll_bb.value;
  broadband.mode = collection::ReadoutMode::Broadband;

  const double ratio_zpl = collection::photon_ratio(zpl);
  const double ratio_bb = collection::photon_ratio(broadband);

  Report rep("snr");
  rep.add("lifetime_factor", lifetime.value, "dimensionless", lifetime.source);
  rep.add("collection_factor_zpl", coll_zpl.value, "dimensionless",
          coll_zpl.source);
  rep.add("collection_factor_broadband", coll_bb.value, "dimensionless",
          coll_bb.source);
  rep.add("zpl_fraction_off", zpl_off.value, "dimensionless", zpl_off.source);
  rep.add("zpl_fraction_on", zpl_on.value, "dimensionless", zpl_on.source);
  rep.add("contrast_ratio", contrast_ratio.value, "dimensionless",
          contrast_ratio.source);
  rep.add("photon_ratio_zpl", ratio_zpl, "dimensionless", "computed");
  rep.add("zeta_zpl", snr::enhancement(ratio_zpl, contrast_ratio.value),
          "dimensionless", "computed");
  rep.add("photon_ratio_broadband", ratio_bb, "dimensionless", "computed");
  rep.add("zeta_broadband", snr::enhancement(ratio_bb, contrast_ratio.value),
          "dimensionless", "computed");
  rep.add("n0_reference", n0_ref.value, "counts", n0_ref.source);
  rep.add("contrast_reference", c_ref.value, "dimensionless", c_ref.source);
  rep.add("zeta_zpl_exact",
          snr::enhancement_exact(n0_ref.value, c_ref.value, ratio_zpl,
                                 contrast_ratio.value),
          "dimensionless", "computed");
  rep.add("zeta_broadband_exact",
          snr::enhancement_exact(n0_ref.value, c_ref.value, ratio_bb,
                                 contrast_ratio.value),
          "dimensionless", "computed");

  // With a rate model configured, report the modeled contrast ratio under
  // both conventions: a finite readout gate and the full-trace integral.
  if (cfg.has_section("rates")) {
    const levels::RateSet rates_off = rates_from_config(cfg);
    const levels::RateSet rates_on =
        rates_off.with_emission_scaled(lifetime.value);
    const levels::InitMode init = init_from_config(cfg);
    const double start = cfg.get_double_or("gate", "start_ns", 0.0);
    const double width = cfg.get_double_or("gate", "width_ns", 250.0);
    const double horizon = cfg.get_double_or("simulate", "duration_ns", 3000.0);
    const double gated_off = levels::gated_contrast(rates_off, init, start, width);
    const double gated_on = levels::gated_contrast(rates_on, init, start, width);
    const double full_off = levels::gated_contrast(rates_off, init, 0.0, horizon);
    const double full_on = levels::gated_contrast(rates_on, init, 0.0, horizon);
    rep.add("model_contrast_ratio_gated", gated_on / gated_off, "dimensionless",
            "computed");
    rep.add("model_contrast_ratio_integrated", full_on / full_off,
            "dimensionless", "computed");
  }
  return {rep.render(req.format), 0};
}

CommandResult cmd_mc(const RunConfig& cfg, const CommandRequest& req) {
  require(cfg.has_section("mc"), ErrorCode::InvariantViolation,
          "missing config section [mc]");
  snr::CountPair pair;
  pair.n0 = cfg.get_double("mc", "n0");
  pair.n1 = cfg.get_double("mc", "n1");
  const std::uint64_t trials = cfg.get_uint_or("mc", "trials", 1000000);
  std::uint64_t seed = cfg.get_uint_or("mc", "seed", 1);
  const char* seed_source = cfg.has_key("mc", "seed") ? "config" : "default";
  if (req.seed_override) {
    seed = *req.seed_override;
    seed_source = "args";
  }

  const snr::McReport mc = snr::monte_carlo(pair, trials, seed);

  Report rep("mc");
  rep.add("n0", pair.n0, "counts", "config");
  rep.add("n1", pair.n1, "counts", "config");
  rep.add_int("trials", static_cast<std::int64_t>(trials), "dimensionless",
              cfg.has_key("mc", "trials") ? "config" : "default");
  rep.add_int("seed", static_cast<std::int64_t>(seed), "dimensionless",
              seed_source);
  rep.add("mean_diff", mc.mean_diff, "counts", "computed");
  rep.add("var_diff", mc.var_diff, "counts^2", "computed");
  rep.add("expected_var", pair.n0 + pair.n1, "counts^2", "computed");
  rep.add("empirical_snr", mc.empirical_snr, "dimensionless", "computed");
  rep.add("analytic_snr", snr::snr_counts(pair), "dimensionless", "computed");
  return {rep.render(req.format), 0};
}

CommandResult cmd_tune(const RunConfig& cfg, const CommandRequest& req) {
  require(cfg.has_section("tuning"), ErrorCode::InvariantViolation,
          "missing config section [tuning]");
  const double current = cfg.get_double("tuning", "current_nm");
  const double target = cfg.get_double("tuning", "target_nm");
  const Sourced red = pick(cfg, "tuning", "red_rate_nm_per_h", 1.8);
  const Sourced blue = pick(cfg, "tuning", "blue_shift_per_nm_removed", 2.4);

  const cavity::TuningPlan plan =
      cavity::tuning_plan(current, target, red.value, blue.value);

  Report rep("tune");
  rep.add("current", current, "nm", "config");
  rep.add("target", target, "nm", "config");
  rep.add("red_rate", red.value, "nm/h", red.source);
  rep.add("blue_shift_per_nm_removed", blue.value, "nm/nm", blue.source);
  switch (plan.direction) {
    case cavity::TuningPlan::Direction::None:
      rep.add_text("direction", "none", "computed");
      break;
    case cavity::TuningPlan::Direction::RedShift:
      rep.add_text("direction", "red_shift_gas_adsorption", "computed");
      rep.add("exposure", plan.exposure_hours, "h", "computed");
      break;
    case cavity::TuningPlan::Direction::BlueShift:
      rep.add_text("direction", "blue_shift_oxidation", "computed");
      rep.add("removal", plan.removal_nm, "nm", "computed");
      break;
  }
  return {rep.render(req.format), 0};
}

}  // namespace

std::vector<std::string> command_names() {
  return {"simulate", "fit",     "rates", "spectrum", "purcell",
          "collect",  "snr",     "mc",    "tune"};
}

CommandResult run_command(const CommandRequest& request) {
  const RunConfig cfg = request.config_path.empty()
                            ? RunConfig::empty()
                            : RunConfig::load(request.config_path);

  if (request.command == "simulate") return cmd_simulate(cfg, request);
  if (request.command == "fit") return cmd_fit(cfg, request);
  if (request.command == "rates") return cmd_rates(cfg, request);
  if (request.command == "spectrum") return cmd_spectrum(cfg, request);
  if (request.command == "purcell") return cmd_purcell(cfg, request);
  if (request.command == "collect") return cmd_collect(cfg, request);
  if (request.command == "snr") return cmd_snr(cfg, request);
  if (request.command == "mc") return cmd_mc(cfg, request);
  if (request.command == "tune") return cmd_tune(cfg, request);
  fail(ErrorCode::InvalidInput, "unknown subcommand '" + request.command + "'");
}

}  // namespace nvcavity::pipeline
