// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "nvcavity/collection.hpp"
#include "nvcavity/fitkit.hpp"
#include "nvcavity/levels.hpp"

namespace nvcavity::csvio {

// CSV conventions shared by every format: UTF-8, LF line endings, mandatory
// header row, '.' decimal separator, leading '#' comment lines permitted on
// load, numbers written with up to 9 significant digits. Parsing is
// locale-independent.

/// Canonical number formatting used for CSV files and reports.
std::string format_number(double value);

/// Header `time_ns,signal`.
levels::TimeTrace load_trace(const std::string& path);
void save_trace(const levels::TimeTrace& trace, const std::string& path);

/// Header `wavelength_nm,intensity` or `frequency_ghz,intensity`.
fitkit::Spectrum load_spectrum(const std::string& path);
void save_spectrum(const fitkit::Spectrum& spectrum, const std::string& path);

/// Header `wavelength_nm,eps_x,eps_y,eps_z`.
collection::EfficiencyTable load_efficiency_table(const std::string& path);
void save_efficiency_table(const collection::EfficiencyTable& table,
                           const std::string& path);

/// Header `power_mw,rate_khz`.
fitkit::SaturationData load_saturation(const std::string& path);
void save_saturation(const fitkit::SaturationData& data,
                     const std::string& path);

}  // namespace nvcavity::csvio
