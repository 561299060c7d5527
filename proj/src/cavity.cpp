// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nvcavity::cavity {

void ModeFit::validate() const {
  require(std::isfinite(center_nm) && std::isfinite(fwhm_nm) &&
              std::isfinite(area_mode) && std::isfinite(area_total),
          ErrorCode::NonFiniteInput, "mode fit contains non-finite values");
  require(fwhm_nm > 0.0, ErrorCode::InvalidInput, "mode fwhm must be > 0");
  require(area_mode > 0.0 && area_mode <= area_total, ErrorCode::InvalidInput,
          "mode area must satisfy 0 < area_mode <= area_total");
}

void CavityParams::validate() const {
  const double values[] = {q_factor,         mode_volume,     wavelength_nm,
                           refractive_index, emitter_fwhm_ghz, zpl_fraction};
  for (double v : values)
    require(std::isfinite(v) && v > 0.0, ErrorCode::InvalidInput,
            "cavity parameters must be positive and finite");
  require(zpl_fraction < 1.0, ErrorCode::InvalidInput,
          "zpl_fraction must be in (0, 1)");
}

double q_factor(double center_nm, double fwhm_nm) {
  require(std::isfinite(center_nm) && std::isfinite(fwhm_nm),
          ErrorCode::NonFiniteInput, "Q inputs must be finite");
  require(center_nm > 0.0 && fwhm_nm > 0.0, ErrorCode::InvalidInput,
          "center and fwhm must be > 0");
  require(fwhm_nm < center_nm, ErrorCode::InvalidInput,
          "fwhm must be smaller than the center wavelength");
  return center_nm / fwhm_nm;
}

ModeFit analyze_mode_spectrum(const fitkit::Spectrum& s) {
  s.validate();
  require(s.unit == fitkit::Spectrum::Unit::Nanometer, ErrorCode::InvalidInput,
          "mode analysis expects a wavelength spectrum");

  // Rough width from the half-maximum crossings around the highest sample.
  const auto peak = static_cast<std::ptrdiff_t>(
      std::distance(s.y.begin(), std::max_element(s.y.begin(), s.y.end())));
  std::vector<double> sorted_y = s.y;
  std::nth_element(sorted_y.begin(), sorted_y.begin() + sorted_y.size() / 2,
                   sorted_y.end());
  const double floor_level = sorted_y[sorted_y.size() / 2];
  const double half = floor_level + 0.5 * (s.y[peak] - floor_level);
  std::ptrdiff_t lo = peak, hi = peak;
  const auto n = static_cast<std::ptrdiff_t>(s.size());
  while (lo > 0 && s.y[lo] > half) --lo;
  while (hi < n - 1 && s.y[hi] > half) ++hi;
  const double width_est = std::max(s.x[hi] - s.x[lo],
                                    (s.x.back() - s.x.front()) / static_cast<double>(n));

  // Local fit window keeps the broad background from biasing the line fit.
  std::vector<double> wx, wy;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s.x[i] - s.x[peak]) <= 5.0 * width_est) {
      wx.push_back(s.x[i]);
      wy.push_back(s.y[i]);
    }
  }
  require(wx.size() >= 4, ErrorCode::NoPeakFound,
          "too few samples around the candidate mode line");
  const FitResult fit =
      fit_lorentzian(fitkit::Spectrum(s.unit, std::move(wx), std::move(wy)));

  double total = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i)
    total += 0.5 * (s.y[i] + s.y[i - 1]) * (s.x[i] - s.x[i - 1]);

  ModeFit mode;
  mode.center_nm = fit.param("center");
  mode.fwhm_nm = fit.param("fwhm");
  mode.area_mode = fit.param("area");
  mode.area_total = total;
  mode.validate();
  return mode;
}

double beta_from_spectrum(const ModeFit& fit) {
  fit.validate();
  return fit.area_mode / fit.area_total;
}

double purcell_from_beta(double beta) {
  require(std::isfinite(beta) && beta >= 0.0 && beta < 1.0,
          ErrorCode::InvalidProbability, "beta must be in [0, 1)");
  return beta / (1.0 - beta);
}

double beta_from_purcell(double purcell) {
  require(std::isfinite(purcell) && purcell >= 0.0, ErrorCode::InvalidInput,
          "Purcell factor must be >= 0");
  return purcell / (1.0 + purcell);
}

PurcellPrediction predict_purcell(const CavityParams& p) {
  p.validate();
  PurcellPrediction out;
  const double frequency_ghz = kSpeedOfLightNmGhz / p.wavelength_nm;
  out.q_emitter = frequency_ghz / p.emitter_fwhm_ghz;
  out.q_effective = 1.0 / (1.0 / p.q_factor + 1.0 / out.q_emitter);
  out.f_zpl = 3.0 / (4.0 * std::numbers::pi * std::numbers::pi) *
              out.q_effective / p.mode_volume;
  out.total_factor = 1.0 + p.zpl_fraction * (out.f_zpl - 1.0);
  return out;
}

double lifetime_ratio(double tau_off_ns, double tau_on_ns) {
  require(std::isfinite(tau_off_ns) && std::isfinite(tau_on_ns),
          ErrorCode::NonFiniteInput, "lifetimes must be finite");
  require(tau_off_ns > 0.0 && tau_on_ns > 0.0, ErrorCode::InvalidInput,
          "lifetimes must be > 0");
  return tau_off_ns / tau_on_ns;
}

TuningPlan tuning_plan(double current_nm, double target_nm,
                       double red_rate_nm_per_h,
                       double blue_shift_per_nm_removed) {
  require(std::isfinite(current_nm) && std::isfinite(target_nm),
          ErrorCode::NonFiniteInput, "mode positions must be finite");
  require(current_nm > 0.0 && target_nm > 0.0, ErrorCode::InvalidInput,
          "mode positions must be > 0");
  require(red_rate_nm_per_h > 0.0 && blue_shift_per_nm_removed > 0.0,
          ErrorCode::InvalidInput, "tuning rates must be > 0");

  TuningPlan plan;
  const double shift = target_nm - current_nm;
  if (shift == 0.0) return plan;
  if (shift > 0.0) {
    plan.direction = TuningPlan::Direction::RedShift;
    plan.exposure_hours = shift / red_rate_nm_per_h;
  } else {
    plan.direction = TuningPlan::Direction::BlueShift;
    plan.removal_nm = -shift / blue_shift_per_nm_removed;
  }
  return plan;
}

}  // namespace nvcavity::cavity
