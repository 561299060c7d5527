// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "nvcavity/errors.hpp"

namespace nvcavity::snr {

/// Expected detected counts per readout for the two spin preparations.
struct CountPair {
  double n0 = 0.0;  ///< ms = 0 preparation
  double n1 = 0.0;  ///< ms = +-1 preparation
  void validate() const;
};

struct McReport {
  std::uint64_t trials = 0;
  double mean_diff = 0.0;
  double var_diff = 0.0;
  double empirical_snr = 0.0;
  std::uint64_t seed = 0;
};

/// (n0 - n1) / sqrt(n0 + n1): the Skellam-noise-limited readout SNR.
double snr_counts(const CountPair& p);

/// C = (n0 - n1) / n0. Negative values are returned as-is.
double contrast(const CountPair& p);

/// sqrt(n0) * c / sqrt(2 - c); algebraically identical to
/// snr_counts({n0, n0 (1 - c)}).
double snr_contrast(double n0, double c);

/// Small-contrast readout-SNR enhancement
/// zeta = sqrt(photon_ratio) * contrast_ratio.
double enhancement(double photon_ratio, double contrast_ratio);

/// Exact variant: ratio of snr_counts at the scaled and reference counts,
/// with n1 = n0 (1 - c) in both cases.
double enhancement_exact(double n0_reference, double contrast_reference,
                         double photon_ratio, double contrast_ratio);

/// Draws `trials` independent Poisson count pairs and reports statistics of
/// their difference. Deterministic for a fixed seed: trials are split into
/// fixed shards with derived seeds and recombined in shard order, so the
/// result does not depend on how shards are scheduled.
McReport monte_carlo(const CountPair& p, std::uint64_t trials,
                     std::uint64_t seed);

}  // namespace nvcavity::snr
