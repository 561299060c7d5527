// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "nvcavity/errors.hpp"

namespace nvcavity::collection {

/// A per-dipole-axis triple (rates, Purcell factors, fractions, ...).
struct Axis3 {
  double x = 0.0, y = 0.0, z = 0.0;
  double sum() const { return x + y + z; }
};

/// Projection weights of the averaged emission dipoles onto the lab axes.
struct DipoleWeights {
  double k_x = 0.0, k_y = 0.0, k_z = 0.0;
  void validate() const;  // each >= 0, sum to 1 within 1e-9
};

/// Simulated collection efficiencies per dipole orientation, tabulated
/// against wavelength. No extrapolation outside the tabulated range.
struct EfficiencyTable {
  std::vector<double> wavelength_nm;  // strictly increasing
  std::vector<double> eps_x, eps_y, eps_z;  // each in [0,1]

  EfficiencyTable() = default;
  EfficiencyTable(std::vector<double> wl, std::vector<double> ex,
                  std::vector<double> ey, std::vector<double> ez);
  std::size_t size() const { return wavelength_nm.size(); }
  void validate() const;
};

enum class ReadoutMode { ZplOnly, Broadband };

/// The on/off-resonance factor bundle feeding the photon-ratio computation.
/// Starred (on-resonance) over unstarred (off-resonance) quantities.
struct ReadoutScenario {
  double lifetime_factor = 1.0;    ///< emitted-photon ratio tau_off/tau_on
  double collection_factor = 1.0;  ///< collection-efficiency ratio
  double zpl_fraction_off = 0.0;   ///< ZPL emission fraction, mode detuned
  double zpl_fraction_on = 0.0;    ///< ZPL emission fraction, mode resonant
  double contrast_ratio = 1.0;     ///< C*/C
  ReadoutMode mode = ReadoutMode::ZplOnly;
  void validate() const;
};

/// Purcell- and projection-weighted spontaneous emission rates per axis:
/// rate_i = gamma * F_i * k_i.
Axis3 effective_rates(double gamma_mhz, const DipoleWeights& weights,
                      const Axis3& purcell_factors);

/// Normalizes per-axis rates to emission fractions summing to 1.
Axis3 emission_fractions(const Axis3& rates);

/// Interpolates each axis efficiency at `wavelength_nm` and combines with the
/// emission fractions.
double combined_efficiency(const EfficiencyTable& table, const Axis3& fractions,
                           double wavelength_nm);

/// Default collection-efficiency drop factors on resonance.
double scenario_collection_factor(ReadoutMode mode);

/// Collection factor computed from a table instead of the defaults:
/// ratio of combined efficiencies at the on- and off-resonant configurations.
double collection_factor_from_table(const EfficiencyTable& table,
                                    const Axis3& fractions,
                                    double wavelength_off_nm,
                                    double wavelength_on_nm);

/// N0*/N0: lifetime * collection for Broadband, additionally weighted by the
/// ZPL-fraction ratio for ZplOnly.
double photon_ratio(const ReadoutScenario& s);

}  // namespace nvcavity::collection
