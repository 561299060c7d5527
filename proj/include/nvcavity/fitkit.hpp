// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nvcavity/errors.hpp"
#include "nvcavity/levels.hpp"

namespace nvcavity::fitkit {

/// A sampled spectrum: strictly increasing abscissa (unit-tagged),
/// nonnegative finite intensities, at least 4 points.
struct Spectrum {
  enum class Unit { Nanometer, Gigahertz };
  Unit unit = Unit::Nanometer;
  std::vector<double> x;
  std::vector<double> y;

  Spectrum() = default;
  Spectrum(Unit u, std::vector<double> abscissa, std::vector<double> intensity);
  std::size_t size() const { return x.size(); }
  void validate() const;
};

struct FitResult {
  std::map<std::string, double> params;
  std::map<std::string, double> stderrs;  // populated only when converged
  double residual_norm = 0.0;             // sqrt(sum of squared residuals)
  bool converged = false;
  int iterations = 0;

  double param(const std::string& name) const;
  double stderr_of(const std::string& name) const;
};

/// A parametric curve y(x; p) with optional analytic gradient and parameter
/// validity predicate (trial steps violating it are rejected).
struct CurveModel {
  std::string id;
  std::vector<std::string> names;
  std::function<double(double x, std::span<const double> p)> eval;
  std::function<void(double x, std::span<const double> p, std::span<double> grad)>
      grad;  // may be null: central differences are used instead
  std::function<bool(std::span<const double> p)> valid;  // may be null
};

/// Registry of the built-in curve families: lorentzian, gaussian, gaussian2,
/// odmr, rabi, double_exp, saturation.
const CurveModel& model_by_id(const std::string& id);
std::vector<std::string> model_ids();

/// General residual-vector problem for fits that are not simple y(x) curves.
struct ResidualProblem {
  std::size_t residual_count = 0;
  std::vector<std::string> names;
  std::function<bool(std::span<const double> p, std::span<double> r)> residuals;
  /// Analytic Jacobian, row-major residual_count x names.size(); may be null,
  /// in which case central differences are used.
  std::function<bool(std::span<const double> p, std::span<double> jacobian)>
      jacobian;
  std::function<bool(std::span<const double> p)> valid;  // may be null
};

/// Damped Gauss-Newton (Levenberg-Marquardt) minimizer of |r(p)|^2.
/// lambda starts at 1e-3, x10 on rejected steps, /3 on accepted ones.
/// Converged when the relative parameter change drops below 1e-8 or the
/// gradient infinity-norm below 1e-10; at most 500 iterations, after which
/// the best point so far is returned with converged = false.
FitResult fit_residuals(const ResidualProblem& problem,
                        std::span<const double> initial_guess);

/// Least-squares fit of a curve model to (x, y) samples.
FitResult fit_curve(const CurveModel& model, std::span<const double> x,
                    std::span<const double> y,
                    std::span<const double> initial_guess);

/// The residual problem fit_curve solves, exposed so the analytic model
/// gradients can be cross-checked against numeric_jacobian. The returned
/// problem references `model`, `x` and `y`.
ResidualProblem curve_problem(const CurveModel& model,
                              std::span<const double> x,
                              std::span<const double> y);

/// Central-difference Jacobian of a residual problem, h = 1e-6 * scale with
/// scale = max(|p_j|, 1). Exposed so analytic gradients can be cross-checked.
std::vector<double> numeric_jacobian(const ResidualProblem& problem,
                                     std::span<const double> p);

// --- auto-seeded convenience fits -----------------------------------------

FitResult fit_lorentzian(const Spectrum& s);
FitResult fit_gaussian(const Spectrum& s);
FitResult fit_two_gaussians(const Spectrum& s);
/// Two inverted Lorentzian dips on a constant baseline; centers returned in
/// ascending order. Requires a GHz abscissa.
FitResult fit_odmr(const Spectrum& s);
/// Exponentially damped cosine; reports the derived pi_time = period/2.
FitResult fit_rabi(const levels::TimeTrace& t);
/// Two-exponential decay with tau1 >= tau2 by convention.
FitResult fit_double_exponential(const levels::TimeTrace& t);

struct SaturationData {
  std::vector<double> power_mw;
  std::vector<double> rate_khz;
  void validate() const;
};

/// I(P) = i_inf * P / (P + p_sat) + background_slope * P.
FitResult fit_saturation(const SaturationData& data);

/// Joint fit of the two prepared-state fluorescence curves of the five-level
/// model with shared parameters k_0, k_s, k_m; k_e = k_f = k_f_fixed.
FitResult fit_rates(const levels::TimeTrace& trace0,
                    const levels::TimeTrace& trace1, double k_f_fixed,
                    levels::MixingVariant variant =
                        levels::MixingVariant::RadiativeMixing,
                    const levels::InitMode& init = levels::InitMode::ideal());

struct VariantComparison {
  FitResult radiative;
  FitResult nonradiative;
  bool radiative_preferred() const {
    return radiative.residual_norm < nonradiative.residual_norm;
  }
};

/// fit_rates under both mixing variants, so residuals can be compared.
VariantComparison compare_mixing_variants(
    const levels::TimeTrace& trace0, const levels::TimeTrace& trace1,
    double k_f_fixed,
    const levels::InitMode& init = levels::InitMode::ideal());

}  // namespace nvcavity::fitkit
