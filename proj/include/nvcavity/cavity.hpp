// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nvcavity/errors.hpp"
#include "nvcavity/fitkit.hpp"

namespace nvcavity::cavity {

/// Speed of light in nm * GHz (i.e. frequency_GHz = kSpeedOfLightNmGhz / wavelength_nm).
inline constexpr double kSpeedOfLightNmGhz = 2.99792458e8;

/// Decomposition of a photoluminescence spectrum into the cavity-mode line
/// and the total emission it sits on.
struct ModeFit {
  double center_nm = 0.0;
  double fwhm_nm = 0.0;
  double area_mode = 0.0;   ///< integral of the fitted mode line
  double area_total = 0.0;  ///< trapezoid integral of the full spectrum
  void validate() const;
};

struct CavityParams {
  double q_factor = 0.0;
  double mode_volume = 0.0;  ///< in units of (lambda/n)^3
  double wavelength_nm = 0.0;
  double refractive_index = 2.4;
  double emitter_fwhm_ghz = 0.0;
  double zpl_fraction = 0.0;  ///< Debye-Waller factor, in (0,1)
  void validate() const;
};

struct PurcellPrediction {
  double q_emitter = 0.0;
  double q_effective = 0.0;
  double f_zpl = 0.0;         ///< Purcell factor of the ZPL channel
  double total_factor = 0.0;  ///< net lifetime-shortening factor
};

struct TuningPlan {
  enum class Direction { None, RedShift, BlueShift };
  Direction direction = Direction::None;
  double exposure_hours = 0.0;  ///< gas-adsorption red tuning
  double removal_nm = 0.0;      ///< oxidation blue tuning (material removed)
};

/// Q = center / fwhm.
double q_factor(double center_nm, double fwhm_nm);

/// Lorentzian fit of the dominant line within a local window around the peak,
/// total area from the trapezoid rule over the entire (background-inclusive)
/// spectrum.
ModeFit analyze_mode_spectrum(const fitkit::Spectrum& s);

/// beta* = area_mode / area_total.
double beta_from_spectrum(const ModeFit& fit);

/// F = beta / (1 - beta); inverse of beta_from_purcell.
double purcell_from_beta(double beta);
double beta_from_purcell(double purcell);

/// Effective-Q Purcell estimate: 1/Q_eff = 1/Q_cav + 1/Q_em with
/// Q_em = (c/lambda)/emitter_fwhm, F_zpl = (3/4pi^2) Q_eff/V, and the
/// lifetime-shortening factor 1 + xi (F_zpl - 1) from ZPL-branching.
PurcellPrediction predict_purcell(const CavityParams& p);

/// tau_off / tau_on: the emitted-photon enhancement factor in saturation.
double lifetime_ratio(double tau_off_ns, double tau_on_ns);

/// Linear tuning schedule toward the target mode position: gas adsorption
/// (nm/h) for red shifts, surface oxidation (nm shift per nm removed) for
/// blue shifts.
TuningPlan tuning_plan(double current_nm, double target_nm,
                       double red_rate_nm_per_h,
                       double blue_shift_per_nm_removed);

}  // namespace nvcavity::cavity
