/*
 * Copyright 2026 the nvcavity developers.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the nvcavity shared library: simulation of five-level NV spin
 * dynamics, spectroscopic curve fitting, cavity/collection analytics and
 * photon-statistics tools behind opaque handles and status codes.
 *
 * Conventions:
 *   - every function returns an nvc_status; results go to out-parameters
 *   - population vectors are double[5] ordered G0, G1, E0, E1, S
 *   - rates are MHz, times ns, wavelengths nm unless noted otherwise
 *   - on failure, nvc_last_error_message() describes the problem for the
 *     calling thread and out-parameters are left untouched
 *   - handles are freed with the matching nvc_*_free function; passing NULL
 *     to a free function is a no-op
 */
#ifndef NVCAVITY_NVCAVITY_H_
#define NVCAVITY_NVCAVITY_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NVC_API __declspec(dllexport)
#else
#define NVC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as process exit classes. */
typedef enum nvc_status {
  NVC_OK = 0,
  NVC_E_VALIDATION = 2,
  NVC_E_NONCONVERGENCE = 3,
  NVC_E_IO = 4
} nvc_status;

NVC_API const char* nvc_version(void);
NVC_API const char* nvc_last_error_message(void);

/* --- five-level rate model ---------------------------------------------- */

typedef enum nvc_mixing_variant {
  NVC_MIXING_RADIATIVE = 0,
  NVC_MIXING_NONRADIATIVE_EXCITED = 1
} nvc_mixing_variant;

typedef struct nvc_rates {
  double k_e, k_f, k_s, k_0, k_m; /* MHz */
  int mixing;                     /* nvc_mixing_variant */
} nvc_rates;

typedef enum nvc_init_kind {
  NVC_INIT_IDEAL = 0,
  NVC_INIT_POLARIZED = 1,
  NVC_INIT_PUMPED = 2
} nvc_init_kind;

typedef struct nvc_init {
  int kind;                /* nvc_init_kind */
  double polarization;     /* Polarized: probability of ms=0 */
  double pump_duration_us; /* Pumped */
  double dark_wait_us;     /* Pumped */
} nvc_init;

typedef enum nvc_prep { NVC_PREP_MS0 = 0, NVC_PREP_MS1 = 1 } nvc_prep;

/* Row-major 5x5 generator matrix M (MHz) with d/dt B = M B. */
NVC_API nvc_status nvc_generator_matrix(const nvc_rates* rates,
                                        double out_matrix[25]);
NVC_API nvc_status nvc_evolve(const nvc_rates* rates, const double pop_in[5],
                              double t_ns, double pop_out[5]);
NVC_API nvc_status nvc_evolve_rk4(const nvc_rates* rates,
                                  const double pop_in[5], double t_ns,
                                  double pop_out[5]);
NVC_API nvc_status nvc_steady_state(const nvc_rates* rates, double pop_out[5]);
NVC_API nvc_status nvc_initialize(const nvc_rates* rates, const nvc_init* init,
                                  double pop_out[5]);
NVC_API nvc_status nvc_apply_pi_pulse(double pop_inout[5]);
NVC_API nvc_status nvc_fluorescence_rate(const nvc_rates* rates,
                                         const double pop[5],
                                         int include_mixing_photons,
                                         double* out_mhz);
NVC_API nvc_status nvc_gated_contrast(const nvc_rates* rates,
                                      const nvc_init* init,
                                      double gate_start_ns,
                                      double gate_width_ns, double* out);
NVC_API nvc_status nvc_contrast_reduction(const nvc_rates* rates_off,
                                          const nvc_rates* rates_on,
                                          const nvc_init* init,
                                          double gate_start_ns,
                                          double gate_width_ns, double* out);

/* --- time traces ---------------------------------------------------------- */

typedef struct nvc_trace nvc_trace;

NVC_API nvc_status nvc_trace_create(const double* times_ns,
                                    const double* values, size_t length,
                                    nvc_trace** out);
NVC_API nvc_status nvc_trace_load(const char* path, nvc_trace** out);
NVC_API nvc_status nvc_trace_save(const nvc_trace* trace, const char* path);
NVC_API size_t nvc_trace_length(const nvc_trace* trace);
/* Copies into caller-allocated arrays of nvc_trace_length() doubles;
 * either destination may be NULL to skip it. */
NVC_API nvc_status nvc_trace_copy(const nvc_trace* trace, double* times_ns,
                                  double* values);
NVC_API void nvc_trace_free(nvc_trace* trace);

NVC_API nvc_status nvc_readout_trace(const nvc_rates* rates, int prep,
                                     const nvc_init* init, double duration_ns,
                                     double step_ns,
                                     int include_mixing_photons,
                                     nvc_trace** out);
NVC_API nvc_status nvc_contrast_trace(const nvc_trace* trace0,
                                      const nvc_trace* trace1,
                                      double normalization, nvc_trace** out);

/* --- spectra -------------------------------------------------------------- */

typedef enum nvc_spectrum_unit {
  NVC_UNIT_NM = 0,
  NVC_UNIT_GHZ = 1
} nvc_spectrum_unit;

typedef struct nvc_spectrum nvc_spectrum;

NVC_API nvc_status nvc_spectrum_create(int unit, const double* abscissa,
                                       const double* intensity, size_t length,
                                       nvc_spectrum** out);
NVC_API nvc_status nvc_spectrum_load(const char* path, nvc_spectrum** out);
NVC_API nvc_status nvc_spectrum_save(const nvc_spectrum* spectrum,
                                     const char* path);
NVC_API size_t nvc_spectrum_length(const nvc_spectrum* spectrum);
NVC_API int nvc_spectrum_unit_of(const nvc_spectrum* spectrum);
NVC_API nvc_status nvc_spectrum_copy(const nvc_spectrum* spectrum,
                                     double* abscissa, double* intensity);
NVC_API void nvc_spectrum_free(nvc_spectrum* spectrum);

/* --- curve fitting -------------------------------------------------------- */

typedef struct nvc_fit nvc_fit;

NVC_API nvc_status nvc_fit_spectrum_model(const char* model,
                                          const nvc_spectrum* spectrum,
                                          nvc_fit** out);
NVC_API nvc_status nvc_fit_rabi(const nvc_trace* trace, nvc_fit** out);
NVC_API nvc_status nvc_fit_double_exponential(const nvc_trace* trace,
                                              nvc_fit** out);
NVC_API nvc_status nvc_fit_saturation(const double* power_mw,
                                      const double* rate_khz, size_t length,
                                      nvc_fit** out);
NVC_API nvc_status nvc_fit_rates(const nvc_trace* trace0,
                                 const nvc_trace* trace1, double k_f_fixed,
                                 int mixing_variant, nvc_fit** out);
NVC_API nvc_status nvc_compare_mixing_variants(const nvc_trace* trace0,
                                               const nvc_trace* trace1,
                                               double k_f_fixed,
                                               nvc_fit** out_radiative,
                                               nvc_fit** out_nonradiative);

NVC_API size_t nvc_fit_param_count(const nvc_fit* fit);
NVC_API const char* nvc_fit_param_name(const nvc_fit* fit, size_t index);
NVC_API nvc_status nvc_fit_param(const nvc_fit* fit, const char* name,
                                 double* out);
NVC_API nvc_status nvc_fit_stderr(const nvc_fit* fit, const char* name,
                                  double* out);
NVC_API int nvc_fit_converged(const nvc_fit* fit);
NVC_API int nvc_fit_iterations(const nvc_fit* fit);
NVC_API double nvc_fit_residual_norm(const nvc_fit* fit);
NVC_API void nvc_fit_free(nvc_fit* fit);

/* --- cavity analytics ------------------------------------------------------ */

NVC_API nvc_status nvc_q_factor(double center_nm, double fwhm_nm, double* out);
/* Lorentzian mode line over total spectrum area; out_mode_fit (optional,
 * double[4]) receives center_nm, fwhm_nm, area_mode, area_total. */
NVC_API nvc_status nvc_beta_from_spectrum(const nvc_spectrum* spectrum,
                                          double* out_beta,
                                          double out_mode_fit[4]);
NVC_API nvc_status nvc_purcell_from_beta(double beta, double* out);
NVC_API nvc_status nvc_beta_from_purcell(double purcell, double* out);
NVC_API nvc_status nvc_predict_purcell(double q_factor, double mode_volume,
                                       double wavelength_nm,
                                       double emitter_fwhm_ghz,
                                       double zpl_fraction, double* out_f_zpl,
                                       double* out_total_factor);
NVC_API nvc_status nvc_lifetime_ratio(double tau_off_ns, double tau_on_ns,
                                      double* out);

typedef enum nvc_tuning_direction {
  NVC_TUNE_NONE = 0,
  NVC_TUNE_RED_SHIFT = 1,
  NVC_TUNE_BLUE_SHIFT = 2
} nvc_tuning_direction;

/* out_amount: exposure hours for red shifts, removed nm for blue shifts. */
NVC_API nvc_status nvc_tuning_plan(double current_nm, double target_nm,
                                   double red_rate_nm_per_h,
                                   double blue_shift_per_nm_removed,
                                   int* out_direction, double* out_amount);

/* --- collection ------------------------------------------------------------ */

typedef struct nvc_table nvc_table;

NVC_API nvc_status nvc_table_load(const char* path, nvc_table** out);
NVC_API nvc_status nvc_table_create(const double* wavelength_nm,
                                    const double* eps_x, const double* eps_y,
                                    const double* eps_z, size_t length,
                                    nvc_table** out);
NVC_API void nvc_table_free(nvc_table* table);

NVC_API nvc_status nvc_effective_rates(double gamma_mhz,
                                       const double weights[3],
                                       const double purcell[3],
                                       double out_rates[3]);
NVC_API nvc_status nvc_emission_fractions(const double rates[3],
                                          double out_fractions[3]);
NVC_API nvc_status nvc_combined_efficiency(const nvc_table* table,
                                           const double fractions[3],
                                           double wavelength_nm, double* out);

typedef enum nvc_readout_mode {
  NVC_READOUT_ZPL_ONLY = 0,
  NVC_READOUT_BROADBAND = 1
} nvc_readout_mode;

NVC_API double nvc_scenario_collection_factor(int mode);
/* ZPL fractions are ignored in broadband mode. */
NVC_API nvc_status nvc_photon_ratio(double lifetime_factor,
                                    double collection_factor,
                                    double zpl_fraction_off,
                                    double zpl_fraction_on, int mode,
                                    double* out);

/* --- SNR and photon statistics --------------------------------------------- */

NVC_API nvc_status nvc_snr_counts(double n0, double n1, double* out);
NVC_API nvc_status nvc_contrast(double n0, double n1, double* out);
NVC_API nvc_status nvc_snr_contrast(double n0, double c, double* out);
NVC_API nvc_status nvc_enhancement(double photon_ratio, double contrast_ratio,
                                   double* out);
NVC_API nvc_status nvc_enhancement_exact(double n0_reference,
                                         double contrast_reference,
                                         double photon_ratio,
                                         double contrast_ratio, double* out);

typedef struct nvc_mc_report {
  uint64_t trials;
  double mean_diff;
  double var_diff;
  double empirical_snr;
  uint64_t seed;
} nvc_mc_report;

NVC_API nvc_status nvc_monte_carlo(double n0, double n1, uint64_t trials,
                                   uint64_t seed, nvc_mc_report* out);

/* --- pipeline --------------------------------------------------------------- */

/*
 * Runs one subcommand (simulate, fit, rates, spectrum, purcell, collect, snr,
 * mc, tune) against a config file and renders its report ("text" or "csv").
 * config_path may be NULL for commands that can run on defaults/arguments;
 * output_dir defaults to "."; seed_override < 0 leaves the configured seed.
 * On NVC_OK and NVC_E_NONCONVERGENCE *out_report is set and must be released
 * with nvc_string_free.
 */
NVC_API nvc_status nvc_run_command(const char* config_path,
                                   const char* command, int nargs,
                                   const char* const* args,
                                   const char* output_dir, const char* format,
                                   int64_t seed_override, char** out_report);
NVC_API void nvc_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NVCAVITY_NVCAVITY_H_ */
