// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/collection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nvcavity::collection {

namespace {

void require_fractions(const Axis3& fractions) {
  require(std::isfinite(fractions.x) && std::isfinite(fractions.y) &&
              std::isfinite(fractions.z),
          ErrorCode::NonFiniteInput, "fractions must be finite");
  require(fractions.x >= 0.0 && fractions.y >= 0.0 && fractions.z >= 0.0,
          ErrorCode::InvalidInput, "fractions must be >= 0");
  require(std::abs(fractions.sum() - 1.0) <= 1e-9, ErrorCode::InvalidInput,
          "fractions must sum to 1");
}

}  // namespace

void DipoleWeights::validate() const {
  require(std::isfinite(k_x) && std::isfinite(k_y) && std::isfinite(k_z),
          ErrorCode::NonFiniteInput, "dipole weights must be finite");
  require(k_x >= 0.0 && k_y >= 0.0 && k_z >= 0.0, ErrorCode::InvalidInput,
          "dipole weights must be >= 0");
  require(std::abs(k_x + k_y + k_z - 1.0) <= 1e-9, ErrorCode::InvalidInput,
          "dipole weights must sum to 1");
}

EfficiencyTable::EfficiencyTable(std::vector<double> wl, std::vector<double> ex,
                                 std::vector<double> ey, std::vector<double> ez)
    : wavelength_nm(std::move(wl)),
      eps_x(std::move(ex)),
      eps_y(std::move(ey)),
      eps_z(std::move(ez)) {
  validate();
}

void EfficiencyTable::validate() const {
  const std::size_t n = wavelength_nm.size();
  require(n >= 2, ErrorCode::InvariantViolation,
          "efficiency table needs at least 2 rows");
  require(eps_x.size() == n && eps_y.size() == n && eps_z.size() == n,
          ErrorCode::DimensionMismatch, "efficiency table column lengths differ");
  for (std::size_t i = 0; i < n; ++i) {
    require(std::isfinite(wavelength_nm[i]), ErrorCode::NonFiniteInput,
            "wavelengths must be finite");
    if (i > 0)
      require(wavelength_nm[i] > wavelength_nm[i - 1],
              ErrorCode::InvariantViolation,
              "wavelengths must be strictly increasing");
    for (double eps : {eps_x[i], eps_y[i], eps_z[i]}) {
      std::ostringstream msg;
      msg << "efficiency " << eps << " at row " << (i + 1)
          << " outside [0, 1]";
      require(std::isfinite(eps) && eps >= 0.0 && eps <= 1.0,
              ErrorCode::InvariantViolation, msg.str());
    }
  }
}

void ReadoutScenario::validate() const {
  require(std::isfinite(lifetime_factor) && lifetime_factor > 0.0,
          ErrorCode::InvalidInput, "lifetime factor must be > 0");
  require(std::isfinite(collection_factor) && collection_factor > 0.0,
          ErrorCode::InvalidInput, "collection factor must be > 0");
  require(std::isfinite(contrast_ratio) && contrast_ratio > 0.0,
          ErrorCode::InvalidInput, "contrast ratio must be > 0");
  if (mode == ReadoutMode::ZplOnly) {
    for (double f : {zpl_fraction_off, zpl_fraction_on})
      require(std::isfinite(f) && f > 0.0 && f < 1.0, ErrorCode::InvalidInput,
              "ZPL fractions must be in (0, 1)");
  }
}

Axis3 effective_rates(double gamma_mhz, const DipoleWeights& weights,
                      const Axis3& purcell_factors) {
  require(std::isfinite(gamma_mhz) && gamma_mhz > 0.0, ErrorCode::InvalidInput,
          "free-space rate must be > 0");
  weights.validate();
  for (double f : {purcell_factors.x, purcell_factors.y, purcell_factors.z})
    require(std::isfinite(f) && f >= 0.0, ErrorCode::InvalidInput,
            "Purcell factors must be >= 0");
  return {gamma_mhz * purcell_factors.x * weights.k_x,
          gamma_mhz * purcell_factors.y * weights.k_y,
          gamma_mhz * purcell_factors.z * weights.k_z};
}

Axis3 emission_fractions(const Axis3& rates) {
  for (double r : {rates.x, rates.y, rates.z})
    require(std::isfinite(r) && r >= 0.0, ErrorCode::InvalidInput,
            "rates must be >= 0");
  const double total = rates.sum();
  require(total > 0.0, ErrorCode::InvalidInput,
          "at least one rate must be > 0");
  return {rates.x / total, rates.y / total, rates.z / total};
}

double combined_efficiency(const EfficiencyTable& table, const Axis3& fractions,
                           double wavelength_nm) {
  table.validate();
  require_fractions(fractions);
  require(std::isfinite(wavelength_nm), ErrorCode::NonFiniteInput,
          "wavelength must be finite");
  const auto& wl = table.wavelength_nm;
  if (wavelength_nm < wl.front() || wavelength_nm > wl.back()) {
    std::ostringstream msg;
    msg << "wavelength " << wavelength_nm << " nm outside the tabulated range ["
        << wl.front() << ", " << wl.back() << "]";
    fail(ErrorCode::OutOfRange, msg.str());
  }

  const auto upper = std::upper_bound(wl.begin(), wl.end(), wavelength_nm);
  std::size_t hi = std::min<std::size_t>(
      static_cast<std::size_t>(std::distance(wl.begin(), upper)),
      wl.size() - 1);
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double t = (wavelength_nm - wl[lo]) / (wl[hi] - wl[lo]);
  const auto lerp = [&](const std::vector<double>& eps) {
    return eps[lo] + t * (eps[hi] - eps[lo]);
  };
  return fractions.x * lerp(table.eps_x) + fractions.y * lerp(table.eps_y) +
         fractions.z * lerp(table.eps_z);
}

double scenario_collection_factor(ReadoutMode mode) {
  return mode == ReadoutMode::ZplOnly ? 0.87 : 0.97;
}

double collection_factor_from_table(const EfficiencyTable& table,
                                    const Axis3& fractions,
                                    double wavelength_off_nm,
                                    double wavelength_on_nm) {
  const double off = combined_efficiency(table, fractions, wavelength_off_nm);
  const double on = combined_efficiency(table, fractions, wavelength_on_nm);
  require(off > 0.0, ErrorCode::InvalidInput,
          "off-resonant efficiency must be > 0");
  return on / off;
}

double photon_ratio(const ReadoutScenario& s) {
  s.validate();
  double ratio = s.lifetime_factor * s.collection_factor;
  if (s.mode == ReadoutMode::ZplOnly)
    ratio *= s.zpl_fraction_on / s.zpl_fraction_off;
  return ratio;
}

}  // namespace nvcavity::collection
