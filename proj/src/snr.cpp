// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/snr.hpp"

#include <cmath>

#include "nvcavity/detail/rng.hpp"

namespace nvcavity::snr {

void CountPair::validate() const {
  require(std::isfinite(n0) && std::isfinite(n1), ErrorCode::NonFiniteInput,
          "counts must be finite");
  require(n0 >= 0.0 && n1 >= 0.0, ErrorCode::InvalidInput,
          "counts must be >= 0");
}

double snr_counts(const CountPair& p) {
  p.validate();
  require(p.n0 + p.n1 > 0.0, ErrorCode::InvalidInput,
          "SNR needs n0 + n1 > 0");
  return (p.n0 - p.n1) / std::sqrt(p.n0 + p.n1);
}

double contrast(const CountPair& p) {
  p.validate();
  require(p.n0 > 0.0, ErrorCode::InvalidInput, "contrast needs n0 > 0");
  return (p.n0 - p.n1) / p.n0;
}

double snr_contrast(double n0, double c) {
  require(std::isfinite(n0) && n0 > 0.0, ErrorCode::InvalidInput,
          "n0 must be > 0");
  require(std::isfinite(c) && c > -1.0 && c <= 1.0, ErrorCode::InvalidInput,
          "contrast must be in (-1, 1]");
  return std::sqrt(n0) * c / std::sqrt(2.0 - c);
}

double enhancement(double photon_ratio, double contrast_ratio) {
  require(std::isfinite(photon_ratio) && photon_ratio > 0.0,
          ErrorCode::InvalidInput, "photon ratio must be > 0");
  require(std::isfinite(contrast_ratio) && contrast_ratio > 0.0,
          ErrorCode::InvalidInput, "contrast ratio must be > 0");
  return std::sqrt(photon_ratio) * contrast_ratio;
}

double enhancement_exact(double n0_reference, double contrast_reference,
                         double photon_ratio, double contrast_ratio) {
  require(std::isfinite(n0_reference) && n0_reference > 0.0,
          ErrorCode::InvalidInput, "reference counts must be > 0");
  require(std::isfinite(contrast_reference) && contrast_reference > 0.0 &&
              contrast_reference <= 1.0,
          ErrorCode::InvalidInput, "reference contrast must be in (0, 1]");
  require(std::isfinite(photon_ratio) && photon_ratio > 0.0,
          ErrorCode::InvalidInput, "photon ratio must be > 0");
  require(std::isfinite(contrast_ratio) && contrast_ratio > 0.0,
          ErrorCode::InvalidInput, "contrast ratio must be > 0");
  const double scaled_contrast = contrast_reference * contrast_ratio;
  require(scaled_contrast <= 1.0, ErrorCode::InvalidInput,
          "scaled contrast exceeds 1");
  return snr_contrast(n0_reference * photon_ratio, scaled_contrast) /
         snr_contrast(n0_reference, contrast_reference);
}

McReport monte_carlo(const CountPair& p, std::uint64_t trials,
                     std::uint64_t seed) {
  p.validate();
  require(p.n0 + p.n1 > 0.0, ErrorCode::InvalidInput,
          "Monte Carlo needs n0 + n1 > 0");
  require(trials >= 1000, ErrorCode::InvalidInput,
          "Monte Carlo needs at least 1000 trials");

  // Fixed shard layout with derived per-shard seeds; the shards are
  // independent streams and their sums are combined in shard order, so the
  // result is identical no matter how the shards would be scheduled.
  constexpr std::uint64_t kShards = 16;
  const std::uint64_t per_shard = trials / kShards;
  const std::uint64_t remainder = trials % kShards;

  double sum = 0.0, sum_sq = 0.0;  // integer-valued terms: exact in double
  for (std::uint64_t shard = 0; shard < kShards; ++shard) {
    const std::uint64_t count = per_shard + (shard < remainder ? 1 : 0);
    detail::Rng rng(detail::splitmix64(seed ^ (shard + 1)));
    for (std::uint64_t i = 0; i < count; ++i) {
      const double diff = static_cast<double>(rng.poisson(p.n0)) -
                          static_cast<double>(rng.poisson(p.n1));
      sum += diff;
      sum_sq += diff * diff;
    }
  }

  McReport report;
  report.trials = trials;
  report.seed = seed;
  const auto n = static_cast<double>(trials);
  report.mean_diff = sum / n;
  report.var_diff =
      trials > 1 ? std::max((sum_sq - sum * sum / n) / (n - 1.0), 0.0) : 0.0;
  report.empirical_snr =
      report.var_diff > 0.0 ? report.mean_diff / std::sqrt(report.var_diff)
                            : 0.0;
  return report;
}

}  // namespace nvcavity::snr
