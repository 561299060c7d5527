// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/nvcavity.h"

#include <cstring>
#include <exception>
#include <string>
#include <utility>

#include "nvcavity/cavity.hpp"
#include "nvcavity/collection.hpp"
#include "nvcavity/csvio.hpp"
#include "nvcavity/errors.hpp"
#include "nvcavity/fitkit.hpp"
#include "nvcavity/levels.hpp"
#include "nvcavity/pipeline.hpp"
#include "nvcavity/snr.hpp"

using nvcavity::Error;
using nvcavity::ErrorCode;

struct nvc_trace {
  nvcavity::levels::TimeTrace value;
};

struct nvc_spectrum {
  nvcavity::fitkit::Spectrum value;
};

struct nvc_fit {
  nvcavity::fitkit::FitResult value;
  std::vector<std::string> names;  // stable storage for nvc_fit_param_name
};

struct nvc_table {
  nvcavity::collection::EfficiencyTable value;
};

namespace {

thread_local std::string t_last_error;

nvc_status status_of(const Error& e) {
  t_last_error = e.what();
  switch (nvcavity::exit_code_for(e.code())) {
    case 3:
      return NVC_E_NONCONVERGENCE;
    case 4:
      return NVC_E_IO;
    default:
      return NVC_E_VALIDATION;
  }
}

template <typename Fn>
nvc_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return NVC_OK;
  } catch (const Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return NVC_E_VALIDATION;
  }
}

nvc_status need(const void* pointer, const char* what) {
  t_last_error = std::string("null pointer: ") + what;
  (void)pointer;
  return NVC_E_VALIDATION;
}

#define NVC_REQUIRE(ptr)                         \
  do {                                           \
    if ((ptr) == nullptr) return need(ptr, #ptr); \
  } while (0)

nvcavity::levels::RateSet to_rates(const nvc_rates& r) {
  nvcavity::levels::RateSet rates;
  rates.k_e = r.k_e;
  rates.k_f = r.k_f;
  rates.k_s = r.k_s;
  rates.k_0 = r.k_0;
  rates.k_m = r.k_m;
  switch (r.mixing) {
    case NVC_MIXING_RADIATIVE:
      rates.mixing = nvcavity::levels::MixingVariant::RadiativeMixing;
      break;
    case NVC_MIXING_NONRADIATIVE_EXCITED:
      rates.mixing =
          nvcavity::levels::MixingVariant::NonRadiativeExcitedMixing;
      break;
    default:
      nvcavity::fail(ErrorCode::InvalidInput, "unknown mixing variant");
  }
  return rates;
}

nvcavity::levels::InitMode to_init(const nvc_init& init) {
  switch (init.kind) {
    case NVC_INIT_IDEAL:
      return nvcavity::levels::InitMode::ideal();
    case NVC_INIT_POLARIZED:
      return nvcavity::levels::InitMode::polarized(init.polarization);
    case NVC_INIT_PUMPED:
      return nvcavity::levels::InitMode::pumped(init.pump_duration_us,
                                                init.dark_wait_us);
    default:
      nvcavity::fail(ErrorCode::InvalidInput, "unknown init kind");
  }
}

nvcavity::levels::LevelPopulations to_populations(const double pop[5]) {
  nvcavity::levels::LevelPopulations p{pop[0], pop[1], pop[2], pop[3], pop[4]};
  p.validate();
  return p;
}

void store_populations(const nvcavity::levels::LevelPopulations& p,
                       double out[5]) {
  out[0] = p.g0;
  out[1] = p.g1;
  out[2] = p.e0;
  out[3] = p.e1;
  out[4] = p.s;
}

nvc_fit* make_fit(nvcavity::fitkit::FitResult result) {
  auto* fit = new nvc_fit{std::move(result), {}};
  fit->names.reserve(fit->value.params.size());
  for (const auto& [name, value] : fit->value.params) fit->names.push_back(name);
  return fit;
}

}  // namespace

extern "C" {

const char* nvc_version(void) { return "1.0.0"; }

const char* nvc_last_error_message(void) { return t_last_error.c_str(); }

nvc_status nvc_generator_matrix(const nvc_rates* rates, double out_matrix[25]) {
  NVC_REQUIRE(rates);
  NVC_REQUIRE(out_matrix);
  return guarded([&] {
    const auto m = nvcavity::levels::generator_matrix(to_rates(*rates));
    for (int row = 0; row < 5; ++row)
      for (int col = 0; col < 5; ++col) out_matrix[5 * row + col] = m(row, col);
  });
}

nvc_status nvc_evolve(const nvc_rates* rates, const double pop_in[5],
                      double t_ns, double pop_out[5]) {
  NVC_REQUIRE(rates);
  NVC_REQUIRE(pop_in);
  NVC_REQUIRE(pop_out);
  return guarded([&] {
    store_populations(nvcavity::levels::evolve(to_populations(pop_in),
                                               to_rates(*rates), t_ns),
                      pop_out);
  });
}

nvc_status nvc_evolve_rk4(const nvc_rates* rates, const double pop_in[5],
                          double t_ns, double pop_out[5]) {
  NVC_REQUIRE(rates);
  NVC_REQUIRE(pop_in);
  NVC_REQUIRE(pop_out);
  return guarded([&] {
    store_populations(nvcavity::levels::evolve_rk4(to_populations(pop_in),
                                                   to_rates(*rates), t_ns),
                      pop_out);
  });
}

nvc_status nvc_steady_state(const nvc_rates* rates, double pop_out[5]) {
  NVC_REQUIRE(rates);
  NVC_REQUIRE(pop_out);
  return guarded([&] {
    store_populations(nvcavity::levels::steady_state(to_rates(*rates)), pop_out);
  });
}

nvc_status nvc_initialize(const nvc_rates* rates, const nvc_init* init,
                          double pop_out[5]) {
  NVC_REQUIRE(rates);
  NVC_REQUIRE(init);
  NVC_REQUIRE(pop_out);
  return guarded([&] {
    store_populations(
        nvcavity::levels::initialize(to_init(*init), to_rates(*rates)),
        pop_out);
  });
}

nvc_status nvc_apply_pi_pulse(double pop_inout[5]) {
  NVC_REQUIRE(pop_inout);
  return guarded([&] {
    store_populations(
        nvcavity::levels::apply_pi_pulse(to_populations(pop_inout)), pop_inout);
  });
}

nvc_status nvc_fluorescence_rate(const nvc_rates* rates, const double pop[5],
                                 int include_mixing_photons, double* out_mhz) {
  NVC_REQUIRE(rates);
  NVC_REQUIRE(pop);
  NVC_REQUIRE(out_mhz);
  return guarded([&] {
    *out_mhz = nvcavity::levels::fluorescence_rate(
        to_populations(pop), to_rates(*rates), include_mixing_photons != 0);
  });
}

nvc_status nvc_gated_contrast(const nvc_rates* rates, const nvc_init* init,
                              double gate_start_ns, double gate_width_ns,
                              double* out) {
  NVC_REQUIRE(rates);
  NVC_REQUIRE(init);
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = nvcavity::levels::gated_contrast(to_rates(*rates), to_init(*init),
                                            gate_start_ns, gate_width_ns);
  });
}

nvc_status nvc_contrast_reduction(const nvc_rates* rates_off,
                                  const nvc_rates* rates_on,
                                  const nvc_init* init, double gate_start_ns,
                                  double gate_width_ns, double* out) {
  NVC_REQUIRE(rates_off);
  NVC_REQUIRE(rates_on);
  NVC_REQUIRE(init);
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = nvcavity::levels::contrast_reduction(
        to_rates(*rates_off), to_rates(*rates_on), to_init(*init),
        gate_start_ns, gate_width_ns);
  });
}

nvc_status nvc_trace_create(const double* times_ns, const double* values,
                            size_t length, nvc_trace** out) {
  NVC_REQUIRE(times_ns);
  NVC_REQUIRE(values);
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = new nvc_trace{nvcavity::levels::TimeTrace(
        std::vector<double>(times_ns, times_ns + length),
        std::vector<double>(values, values + length))};
  });
}

nvc_status nvc_trace_load(const char* path, nvc_trace** out) {
  NVC_REQUIRE(path);
  NVC_REQUIRE(out);
  return guarded([&] { *out = new nvc_trace{nvcavity::csvio::load_trace(path)}; });
}

nvc_status nvc_trace_save(const nvc_trace* trace, const char* path) {
  NVC_REQUIRE(trace);
  NVC_REQUIRE(path);
  return guarded([&] { nvcavity::csvio::save_trace(trace->value, path); });
}

size_t nvc_trace_length(const nvc_trace* trace) {
  return trace == nullptr ? 0 : trace->value.size();
}

nvc_status nvc_trace_copy(const nvc_trace* trace, double* times_ns,
                          double* values) {
  NVC_REQUIRE(trace);
  return guarded([&] {
    for (std::size_t i = 0; i < trace->value.size(); ++i) {
      if (times_ns != nullptr) times_ns[i] = trace->value.times_ns[i];
      if (values != nullptr) values[i] = trace->value.values[i];
    }
  });
}

void nvc_trace_free(nvc_trace* trace) { delete trace; }

nvc_status nvc_readout_trace(const nvc_rates* rates, int prep,
                             const nvc_init* init, double duration_ns,
                             double step_ns, int include_mixing_photons,
                             nvc_trace** out) {
  NVC_REQUIRE(rates);
  NVC_REQUIRE(init);
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = new nvc_trace{nvcavity::levels::readout_trace(
        to_rates(*rates),
        prep == NVC_PREP_MS1 ? nvcavity::levels::Prep::Ms1
                             : nvcavity::levels::Prep::Ms0,
        to_init(*init), duration_ns, step_ns, include_mixing_photons != 0)};
  });
}

nvc_status nvc_contrast_trace(const nvc_trace* trace0, const nvc_trace* trace1,
                              double normalization, nvc_trace** out) {
  NVC_REQUIRE(trace0);
  NVC_REQUIRE(trace1);
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = new nvc_trace{nvcavity::levels::contrast_trace(
        trace0->value, trace1->value, normalization)};
  });
}

nvc_status nvc_spectrum_create(int unit, const double* abscissa,
                               const double* intensity, size_t length,
                               nvc_spectrum** out) {
  NVC_REQUIRE(abscissa);
  NVC_REQUIRE(intensity);
  NVC_REQUIRE(out);
  return guarded([&] {
    nvcavity::require(unit == NVC_UNIT_NM || unit == NVC_UNIT_GHZ,
                      ErrorCode::InvalidInput, "unknown spectrum unit");
    *out = new nvc_spectrum{nvcavity::fitkit::Spectrum(
        unit == NVC_UNIT_GHZ ? nvcavity::fitkit::Spectrum::Unit::Gigahertz
                             : nvcavity::fitkit::Spectrum::Unit::Nanometer,
        std::vector<double>(abscissa, abscissa + length),
        std::vector<double>(intensity, intensity + length))};
  });
}

nvc_status nvc_spectrum_load(const char* path, nvc_spectrum** out) {
  NVC_REQUIRE(path);
  NVC_REQUIRE(out);
  return guarded(
      [&] { *out = new nvc_spectrum{nvcavity::csvio::load_spectrum(path)}; });
}

nvc_status nvc_spectrum_save(const nvc_spectrum* spectrum, const char* path) {
  NVC_REQUIRE(spectrum);
  NVC_REQUIRE(path);
  return guarded([&] { nvcavity::csvio::save_spectrum(spectrum->value, path); });
}

size_t nvc_spectrum_length(const nvc_spectrum* spectrum) {
  return spectrum == nullptr ? 0 : spectrum->value.size();
}

int nvc_spectrum_unit_of(const nvc_spectrum* spectrum) {
  if (spectrum == nullptr) return NVC_UNIT_NM;
  return spectrum->value.unit == nvcavity::fitkit::Spectrum::Unit::Gigahertz
             ? NVC_UNIT_GHZ
             : NVC_UNIT_NM;
}

nvc_status nvc_spectrum_copy(const nvc_spectrum* spectrum, double* abscissa,
                             double* intensity) {
  NVC_REQUIRE(spectrum);
  return guarded([&] {
    for (std::size_t i = 0; i < spectrum->value.size(); ++i) {
      if (abscissa != nullptr) abscissa[i] = spectrum->value.x[i];
      if (intensity != nullptr) intensity[i] = spectrum->value.y[i];
    }
  });
}

void nvc_spectrum_free(nvc_spectrum* spectrum) { delete spectrum; }

nvc_status nvc_fit_spectrum_model(const char* model,
                                  const nvc_spectrum* spectrum, nvc_fit** out) {
  NVC_REQUIRE(model);
  NVC_REQUIRE(spectrum);
  NVC_REQUIRE(out);
  return guarded([&] {
    const std::string id(model);
    nvcavity::fitkit::FitResult result;
    if (id == "lorentzian") {
      result = nvcavity::fitkit::fit_lorentzian(spectrum->value);
    } else if (id == "gaussian") {
      result = nvcavity::fitkit::fit_gaussian(spectrum->value);
    } else if (id == "gaussian2") {
      result = nvcavity::fitkit::fit_two_gaussians(spectrum->value);
    } else if (id == "odmr") {
      result = nvcavity::fitkit::fit_odmr(spectrum->value);
    } else {
      nvcavity::fail(ErrorCode::InvalidInput,
                     "unknown spectrum model '" + id + "'");
    }
    *out = make_fit(std::move(result));
  });
}

nvc_status nvc_fit_rabi(const nvc_trace* trace, nvc_fit** out) {
  NVC_REQUIRE(trace);
  NVC_REQUIRE(out);
  return guarded(
      [&] { *out = make_fit(nvcavity::fitkit::fit_rabi(trace->value)); });
}

nvc_status nvc_fit_double_exponential(const nvc_trace* trace, nvc_fit** out) {
  NVC_REQUIRE(trace);
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = make_fit(nvcavity::fitkit::fit_double_exponential(trace->value));
  });
}

nvc_status nvc_fit_saturation(const double* power_mw, const double* rate_khz,
                              size_t length, nvc_fit** out) {
  NVC_REQUIRE(power_mw);
  NVC_REQUIRE(rate_khz);
  NVC_REQUIRE(out);
  return guarded([&] {
    nvcavity::fitkit::SaturationData data{
        std::vector<double>(power_mw, power_mw + length),
        std::vector<double>(rate_khz, rate_khz + length)};
    *out = make_fit(nvcavity::fitkit::fit_saturation(data));
  });
}

nvc_status nvc_fit_rates(const nvc_trace* trace0, const nvc_trace* trace1,
                         double k_f_fixed, int mixing_variant, nvc_fit** out) {
  NVC_REQUIRE(trace0);
  NVC_REQUIRE(trace1);
  NVC_REQUIRE(out);
  return guarded([&] {
    const auto variant =
        mixing_variant == NVC_MIXING_NONRADIATIVE_EXCITED
            ? nvcavity::levels::MixingVariant::NonRadiativeExcitedMixing
            : nvcavity::levels::MixingVariant::RadiativeMixing;
    *out = make_fit(nvcavity::fitkit::fit_rates(trace0->value, trace1->value,
                                                k_f_fixed, variant));
  });
}

nvc_status nvc_compare_mixing_variants(const nvc_trace* trace0,
                                       const nvc_trace* trace1,
                                       double k_f_fixed,
                                       nvc_fit** out_radiative,
                                       nvc_fit** out_nonradiative) {
  NVC_REQUIRE(trace0);
  NVC_REQUIRE(trace1);
  NVC_REQUIRE(out_radiative);
  NVC_REQUIRE(out_nonradiative);
  return guarded([&] {
    auto cmp = nvcavity::fitkit::compare_mixing_variants(
        trace0->value, trace1->value, k_f_fixed);
    *out_radiative = make_fit(std::move(cmp.radiative));
    *out_nonradiative = make_fit(std::move(cmp.nonradiative));
  });
}

size_t nvc_fit_param_count(const nvc_fit* fit) {
  return fit == nullptr ? 0 : fit->names.size();
}

const char* nvc_fit_param_name(const nvc_fit* fit, size_t index) {
  if (fit == nullptr || index >= fit->names.size()) return nullptr;
  return fit->names[index].c_str();
}

nvc_status nvc_fit_param(const nvc_fit* fit, const char* name, double* out) {
  NVC_REQUIRE(fit);
  NVC_REQUIRE(name);
  NVC_REQUIRE(out);
  return guarded([&] { *out = fit->value.param(name); });
}

nvc_status nvc_fit_stderr(const nvc_fit* fit, const char* name, double* out) {
  NVC_REQUIRE(fit);
  NVC_REQUIRE(name);
  NVC_REQUIRE(out);
  return guarded([&] { *out = fit->value.stderr_of(name); });
}

int nvc_fit_converged(const nvc_fit* fit) {
  return fit != nullptr && fit->value.converged ? 1 : 0;
}

int nvc_fit_iterations(const nvc_fit* fit) {
  return fit == nullptr ? 0 : fit->value.iterations;
}

double nvc_fit_residual_norm(const nvc_fit* fit) {
  return fit == nullptr ? 0.0 : fit->value.residual_norm;
}

void nvc_fit_free(nvc_fit* fit) { delete fit; }

nvc_status nvc_q_factor(double center_nm, double fwhm_nm, double* out) {
  NVC_REQUIRE(out);
  return guarded([&] { *out = nvcavity::cavity::q_factor(center_nm, fwhm_nm); });
}

nvc_status nvc_beta_from_spectrum(const nvc_spectrum* spectrum,
                                  double* out_beta, double out_mode_fit[4]) {
  NVC_REQUIRE(spectrum);
  NVC_REQUIRE(out_beta);
  return guarded([&] {
    const auto mode = nvcavity::cavity::analyze_mode_spectrum(spectrum->value);
    *out_beta = nvcavity::cavity::beta_from_spectrum(mode);
    if (out_mode_fit != nullptr) {
      out_mode_fit[0] = mode.center_nm;
      out_mode_fit[1] = mode.fwhm_nm;
      out_mode_fit[2] = mode.area_mode;
      out_mode_fit[3] = mode.area_total;
    }
  });
}

nvc_status nvc_purcell_from_beta(double beta, double* out) {
  NVC_REQUIRE(out);
  return guarded([&] { *out = nvcavity::cavity::purcell_from_beta(beta); });
}

nvc_status nvc_beta_from_purcell(double purcell, double* out) {
  NVC_REQUIRE(out);
  return guarded([&] { *out = nvcavity::cavity::beta_from_purcell(purcell); });
}

nvc_status nvc_predict_purcell(double q_factor, double mode_volume,
                               double wavelength_nm, double emitter_fwhm_ghz,
                               double zpl_fraction, double* out_f_zpl,
                               double* out_total_factor) {
  NVC_REQUIRE(out_f_zpl);
  NVC_REQUIRE(out_total_factor);
  return guarded([&] {
    nvcavity::cavity::CavityParams params;
    params.q_factor = q_factor;
    params.mode_volume = mode_volume;
    params.wavelength_nm = wavelength_nm;
    params.emitter_fwhm_ghz = emitter_fwhm_ghz;
    params.zpl_fraction = zpl_fraction;
    const auto prediction = nvcavity::cavity::predict_purcell(params);
    *out_f_zpl = prediction.f_zpl;
    *out_total_factor = prediction.total_factor;
  });
}

nvc_status nvc_lifetime_ratio(double tau_off_ns, double tau_on_ns,
                              double* out) {
  NVC_REQUIRE(out);
  return guarded(
      [&] { *out = nvcavity::cavity::lifetime_ratio(tau_off_ns, tau_on_ns); });
}

nvc_status nvc_tuning_plan(double current_nm, double target_nm,
                           double red_rate_nm_per_h,
                           double blue_shift_per_nm_removed, int* out_direction,
                           double* out_amount) {
  NVC_REQUIRE(out_direction);
  NVC_REQUIRE(out_amount);
  return guarded([&] {
    const auto plan = nvcavity::cavity::tuning_plan(
        current_nm, target_nm, red_rate_nm_per_h, blue_shift_per_nm_removed);
    switch (plan.direction) {
      case nvcavity::cavity::TuningPlan::Direction::None:
        *out_direction = NVC_TUNE_NONE;
        *out_amount = 0.0;
        break;
      case nvcavity::cavity::TuningPlan::Direction::RedShift:
        *out_direction = NVC_TUNE_RED_SHIFT;
        *out_amount = plan.exposure_hours;
        break;
      case nvcavity::cavity::TuningPlan::Direction::BlueShift:
        *out_direction = NVC_TUNE_BLUE_SHIFT;
        *out_amount = plan.removal_nm;
        break;
    }
  });
}

nvc_status nvc_table_load(const char* path, nvc_table** out) {
  NVC_REQUIRE(path);
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = new nvc_table{nvcavity::csvio::load_efficiency_table(path)};
  });
}

nvc_status nvc_table_create(const double* wavelength_nm, const double* eps_x,
                            const double* eps_y, const double* eps_z,
                            size_t length, nvc_table** out) {
  NVC_REQUIRE(wavelength_nm);
  NVC_REQUIRE(eps_x);
  NVC_REQUIRE(eps_y);
  NVC_REQUIRE(eps_z);
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = new nvc_table{nvcavity::collection::EfficiencyTable(
        std::vector<double>(wavelength_nm, wavelength_nm + length),
        std::vector<double>(eps_x, eps_x + length),
        std::vector<double>(eps_y, eps_y + length),
        std::vector<double>(eps_z, eps_z + length))};
  });
}

void nvc_table_free(nvc_table* table) { delete table; }

nvc_status nvc_effective_rates(double gamma_mhz, const double weights[3],
                               const double purcell[3], double out_rates[3]) {
  NVC_REQUIRE(weights);
  NVC_REQUIRE(purcell);
  NVC_REQUIRE(out_rates);
  return guarded([&] {
    const auto rates = nvcavity::collection::effective_rates(
        gamma_mhz, {weights[0], weights[1], weights[2]},
        {purcell[0], purcell[1], purcell[2]});
    out_rates[0] = rates.x;
    out_rates[1] = rates.y;
    out_rates[2] = rates.z;
  });
}

nvc_status nvc_emission_fractions(const double rates[3],
                                  double out_fractions[3]) {
  NVC_REQUIRE(rates);
  NVC_REQUIRE(out_fractions);
  return guarded([&] {
    const auto fractions = nvcavity::collection::emission_fractions(
        {rates[0], rates[1], rates[2]});
    out_fractions[0] = fractions.x;
    out_fractions[1] = fractions.y;
    out_fractions[2] = fractions.z;
  });
}

nvc_status nvc_combined_efficiency(const nvc_table* table,
                                   const double fractions[3],
                                   double wavelength_nm, double* out) {
  NVC_REQUIRE(table);
  NVC_REQUIRE(fractions);
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = nvcavity::collection::combined_efficiency(
        table->value, {fractions[0], fractions[1], fractions[2]},
        wavelength_nm);
  });
}

double nvc_scenario_collection_factor(int mode) {
  return nvcavity::collection::scenario_collection_factor(
      mode == NVC_READOUT_BROADBAND
          ? nvcavity::collection::ReadoutMode::Broadband
          : nvcavity::collection::ReadoutMode::ZplOnly);
}

nvc_status nvc_photon_ratio(double lifetime_factor, double collection_factor,
                            double zpl_fraction_off, double zpl_fraction_on,
                            int mode, double* out) {
  NVC_REQUIRE(out);
  return guarded([&] {
    nvcavity::collection::ReadoutScenario scenario;
    scenario.lifetime_factor = lifetime_factor;
    scenario.collection_factor = collection_factor;
    scenario.zpl_fraction_off = zpl_fraction_off;
    scenario.zpl_fraction_on = zpl_fraction_on;
    scenario.mode = mode == NVC_READOUT_BROADBAND
                        ? nvcavity::collection::ReadoutMode::Broadband
                        : nvcavity::collection::ReadoutMode::ZplOnly;
    *out = nvcavity::collection::photon_ratio(scenario);
  });
}

nvc_status nvc_snr_counts(double n0, double n1, double* out) {
  NVC_REQUIRE(out);
  return guarded([&] { *out = nvcavity::snr::snr_counts({n0, n1}); });
}

nvc_status nvc_contrast(double n0, double n1, double* out) {
  NVC_REQUIRE(out);
  return guarded([&] { *out = nvcavity::snr::contrast({n0, n1}); });
}

nvc_status nvc_snr_contrast(double n0, double c, double* out) {
  NVC_REQUIRE(out);
  return guarded([&] { *out = nvcavity::snr::snr_contrast(n0, c); });
}

nvc_status nvc_enhancement(double photon_ratio, double contrast_ratio,
                           double* out) {
  NVC_REQUIRE(out);
  return guarded(
      [&] { *out = nvcavity::snr::enhancement(photon_ratio, contrast_ratio); });
}

nvc_status nvc_enhancement_exact(double n0_reference, double contrast_reference,
                                 double photon_ratio, double contrast_ratio,
                                 double* out) {
  NVC_REQUIRE(out);
  return guarded([&] {
    *out = nvcavity::snr::enhancement_exact(n0_reference, contrast_reference,
                                            photon_ratio, contrast_ratio);
  });
}

nvc_status nvc_monte_carlo(double n0, double n1, uint64_t trials, uint64_t seed,
                           nvc_mc_report* out) {
  NVC_REQUIRE(out);
  return guarded([&] {
    const auto report = nvcavity::snr::monte_carlo({n0, n1}, trials, seed);
    out->trials = report.trials;
    out->mean_diff = report.mean_diff;
    out->var_diff = report.var_diff;
    out->empirical_snr = report.empirical_snr;
    out->seed = report.seed;
  });
}

nvc_status nvc_run_command(const char* config_path, const char* command,
                           int nargs, const char* const* args,
                           const char* output_dir, const char* format,
                           int64_t seed_override, char** out_report) {
  NVC_REQUIRE(command);
  NVC_REQUIRE(out_report);
  int exit_code = 0;
  const nvc_status status = guarded([&] {
    nvcavity::pipeline::CommandRequest request;
    request.command = command;
    if (config_path != nullptr) request.config_path = config_path;
    for (int i = 0; i < nargs; ++i) {
      nvcavity::require(args != nullptr && args[i] != nullptr,
                        ErrorCode::InvalidInput, "null argument");
      request.args.emplace_back(args[i]);
    }
    if (output_dir != nullptr) request.output_dir = output_dir;
    if (format != nullptr)
      request.format = nvcavity::report::format_by_name(format);
    if (seed_override >= 0)
      request.seed_override = static_cast<std::uint64_t>(seed_override);

    const auto result = nvcavity::pipeline::run_command(request);
    exit_code = result.exit_code;
    char* buffer = new char[result.report.size() + 1];
    std::memcpy(buffer, result.report.c_str(), result.report.size() + 1);
    *out_report = buffer;
  });
  if (status != NVC_OK) return status;
  return exit_code == 3 ? NVC_E_NONCONVERGENCE : NVC_OK;
}

void nvc_string_free(char* text) { delete[] text; }

}  // extern "C"
