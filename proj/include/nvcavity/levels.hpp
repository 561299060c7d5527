// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nvcavity/errors.hpp"

namespace nvcavity::levels {

// State ordering used by every 5-vector and generator matrix in this module.
enum Level : int { kG0 = 0, kG1 = 1, kE0 = 2, kE1 = 3, kS = 4 };

using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Vector5 = Eigen::Matrix<double, 5, 1>;

/// Placement of the extra spin-mixing channels: either radiative transitions
/// between ground and excited states of opposite spin, or a non-radiative
/// exchange between the two excited states.
enum class MixingVariant { RadiativeMixing, NonRadiativeExcitedMixing };

/// Transition rates of the five-level model, all in MHz.
struct RateSet {
  double k_e = 0.0;  ///< spin-preserving excitation rate
  double k_f = 0.0;  ///< spin-preserving emission rate
  double k_s = 0.0;  ///< ISC rate, excited ms=+-1 -> singlet
  double k_0 = 0.0;  ///< singlet -> ms=0 ground rate
  double k_m = 0.0;  ///< spin-mixing rate
  MixingVariant mixing = MixingVariant::RadiativeMixing;

  void validate() const;
  double max_rate() const;

  /// Same rate set with excitation and emission scaled by `factor`
  /// (lifetime shortening; the internal rates k_s, k_0, k_m are untouched).
  RateSet with_emission_scaled(double factor) const;
};

/// Occupation probabilities of the five levels. Always a simplex point up to
/// 1e-9 slack; construction validates.
struct LevelPopulations {
  double g0 = 1.0, g1 = 0.0, e0 = 0.0, e1 = 0.0, s = 0.0;

  static LevelPopulations from_vector(const Vector5& v);
  Vector5 to_vector() const;
  double sum() const { return g0 + g1 + e0 + e1 + s; }
  void validate() const;
};

/// How the spin state is prepared before a readout pulse.
struct InitMode {
  enum class Kind { Ideal, Polarized, Pumped };
  Kind kind = Kind::Ideal;
  double polarization = 1.0;    ///< Polarized: probability of ms=0
  double pump_duration_us = 2.0;  ///< Pumped: laser-on time
  double dark_wait_us = 1.0;      ///< Pumped: laser-off singlet-drain time

  static InitMode ideal() { return {}; }
  static InitMode polarized(double p);
  static InitMode pumped(double pump_us, double dark_us);
};

/// A sampled time series: times in ns (strictly increasing), values finite.
struct TimeTrace {
  std::vector<double> times_ns;
  std::vector<double> values;

  TimeTrace() = default;
  TimeTrace(std::vector<double> t, std::vector<double> v);
  std::size_t size() const { return times_ns.size(); }
  void validate() const;
};

enum class Prep { Ms0, Ms1 };

/// Generator matrix M (MHz) of the rate equations, d/dt B = M B.
/// Every column sums to zero for both mixing variants.
Matrix5 generator_matrix(const RateSet& rates);

/// Propagates populations through exp(M t). The eigendecomposition is done
/// once at construction; each at() costs one 5x5 complex multiply.
class Propagator {
 public:
  explicit Propagator(const RateSet& rates);

  LevelPopulations at(const LevelPopulations& pop0, double t_ns) const;
  Vector5 at(const Vector5& pop0, double t_ns) const;

 private:
  Eigen::Matrix<std::complex<double>, 5, 5> vectors_;
  Eigen::Matrix<std::complex<double>, 5, 5> inverse_;
  Eigen::Matrix<std::complex<double>, 5, 1> values_per_ns_;
};

/// exp(M t) pop0 via the cached eigendecomposition route.
LevelPopulations evolve(const LevelPopulations& pop0, const RateSet& rates,
                        double t_ns);

/// Independent check implementation: classical fixed-step RK4.
LevelPopulations evolve_rk4(const LevelPopulations& pop0, const RateSet& rates,
                            double t_ns);

/// Normalized null vector of the generator matrix. Unique for k_m > 0;
/// a null space of dimension > 1 is reported as IllConditioned.
LevelPopulations steady_state(const RateSet& rates);

LevelPopulations initialize(const InitMode& mode, const RateSet& rates);

/// Instantaneous, perfect microwave pi pulse: swaps the two ground states.
LevelPopulations apply_pi_pulse(const LevelPopulations& pop);

/// Detected photon emission rate in MHz. By default k_f * (e0 + e1);
/// with include_mixing_photons the radiative-mixing channels are added
/// (only meaningful for the RadiativeMixing variant).
double fluorescence_rate(const LevelPopulations& pop, const RateSet& rates,
                         bool include_mixing_photons = false);

/// Prepared-state fluorescence trace: initialize (plus pi pulse for Ms1),
/// then evolve under the full rates, sampling every `step_ns` and always
/// including t = duration as the final sample.
TimeTrace readout_trace(const RateSet& rates, Prep prep, const InitMode& init,
                        double duration_ns, double step_ns,
                        bool include_mixing_photons = false);

/// C(t) = (S0(t) - S1(t)) / normalization on a shared time grid.
TimeTrace contrast_trace(const TimeTrace& trace0, const TimeTrace& trace1,
                         double normalization);

/// Gated contrast C = (N0 - N1)/N0 with Ni the trapezoid integral of the
/// prepared traces over [gate_start, gate_start + gate_width], sub-ns steps.
double gated_contrast(const RateSet& rates, const InitMode& init,
                      double gate_start_ns, double gate_width_ns,
                      bool include_mixing_photons = false);

/// Relative gated-contrast reduction 1 - C(rates_on)/C(rates_off).
double contrast_reduction(const RateSet& rates_off, const RateSet& rates_on,
                          const InitMode& init, double gate_start_ns,
                          double gate_width_ns);

}  // namespace nvcavity::levels
