// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/levels.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace nvcavity::levels {

namespace {

constexpr double kMhzToPerNs = 1e-3;  // 1 MHz = 1e-3 / ns
constexpr double kSimplexTol = 1e-9;

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
  double sum = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    sum += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
  return sum;
}

}  // namespace

void RateSet::validate() const {
  const double values[] = {k_e, k_f, k_s, k_0, k_m};
  const char* names[] = {"k_e", "k_f", "k_s", "k_0", "k_m"};
  for (int i = 0; i < 5; ++i) {
    if (!std::isfinite(values[i]))
      fail(ErrorCode::NonFiniteInput, std::string(names[i]) + " is not finite");
    if (values[i] < 0.0)
      fail(ErrorCode::NegativeRate, std::string(names[i]) + " is negative");
  }
}

double RateSet::max_rate() const {
  return std::max({k_e, k_f, k_s, k_0, k_m});
}

RateSet RateSet::with_emission_scaled(double factor) const {
  require(std::isfinite(factor) && factor > 0.0, ErrorCode::InvalidInput,
          "emission scale factor must be positive");
  RateSet scaled = *this;
  scaled.k_e *= factor;
  scaled.k_f *= factor;
  return scaled;
}

LevelPopulations LevelPopulations::from_vector(const Vector5& v) {
  LevelPopulations p{v[kG0], v[kG1], v[kE0], v[kE1], v[kS]};
  p.validate();
  return p;
}

Vector5 LevelPopulations::to_vector() const {
  Vector5 v;
  v << g0, g1, e0, e1, s;
  return v;
}

void LevelPopulations::validate() const {
  const double values[] = {g0, g1, e0, e1, s};
  for (double b : values) {
    if (!std::isfinite(b))
      fail(ErrorCode::NonFiniteInput, "population is not finite");
    if (b < -kSimplexTol || b > 1.0 + kSimplexTol) {
      std::ostringstream msg;
      msg << "population " << b << " outside [0, 1]";
      fail(ErrorCode::InvalidProbability, msg.str());
    }
  }
  if (std::abs(sum() - 1.0) > kSimplexTol)
    fail(ErrorCode::InvalidProbability, "populations do not sum to 1");
}

InitMode InitMode::polarized(double p) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
          ErrorCode::InvalidProbability, "polarization must be in [0, 1]");
  InitMode m;
  m.kind = Kind::Polarized;
  m.polarization = p;
  return m;
}

InitMode InitMode::pumped(double pump_us, double dark_us) {
  require(std::isfinite(pump_us) && pump_us >= 0.0 &&
              std::isfinite(dark_us) && dark_us >= 0.0,
          ErrorCode::InvalidInput, "pump and dark durations must be >= 0");
  InitMode m;
  m.kind = Kind::Pumped;
  m.pump_duration_us = pump_us;
  m.dark_wait_us = dark_us;
  return m;
}

TimeTrace::TimeTrace(std::vector<double> t, std::vector<double> v)
    : times_ns(std::move(t)), values(std::move(v)) {
  validate();
}

void TimeTrace::validate() const {
  require(times_ns.size() == values.size(), ErrorCode::DimensionMismatch,
          "trace time and value lengths differ");
  for (std::size_t i = 0; i < times_ns.size(); ++i) {
    require(std::isfinite(times_ns[i]) && std::isfinite(values[i]),
            ErrorCode::NonFiniteInput, "trace contains non-finite entries");
    if (i > 0)
      require(times_ns[i] > times_ns[i - 1], ErrorCode::InvariantViolation,
              "trace times must be strictly increasing");
  }
}

Matrix5 generator_matrix(const RateSet& rates) {
  rates.validate();
  Matrix5 m = Matrix5::Zero();
  const double ke = rates.k_e, kf = rates.k_f, ks = rates.k_s,
               k0 = rates.k_0, km = rates.k_m;

  // Spin-conserving optical cycle plus the spin-selective ISC branch.
  m(kG0, kG0) -= ke;
  m(kE0, kG0) += ke;
  m(kG1, kG1) -= ke;
  m(kE1, kG1) += ke;
  m(kE0, kE0) -= kf;
  m(kG0, kE0) += kf;
  m(kE1, kE1) -= kf;
  m(kG1, kE1) += kf;
  m(kE1, kE1) -= ks;
  m(kS, kE1) += ks;
  m(kS, kS) -= k0;
  m(kG0, kS) += k0;

  // Spin mixing. Transitions into the doubly degenerate ms=+-1 manifold
  // carry twice the rate of the reverse direction.
  if (rates.mixing == MixingVariant::RadiativeMixing) {
    m(kG0, kG0) -= 2.0 * km;  // G0 -> E1
    m(kE1, kG0) += 2.0 * km;
    m(kG1, kG1) -= km;  // G1 -> E0
    m(kE0, kG1) += km;
    m(kE0, kE0) -= 2.0 * km;  // E0 -> G1
    m(kG1, kE0) += 2.0 * km;
    m(kE1, kE1) -= km;  // E1 -> G0
    m(kG0, kE1) += km;
  } else {
    m(kE0, kE0) -= 2.0 * km;  // E0 -> E1
    m(kE1, kE0) += 2.0 * km;
    m(kE1, kE1) -= km;  // E1 -> E0
    m(kE0, kE1) += km;
  }
  return m;
}

Propagator::Propagator(const RateSet& rates) {
  const Matrix5 m = generator_matrix(rates);
  Eigen::EigenSolver<Matrix5> solver(m);
  require(solver.info() == Eigen::Success, ErrorCode::NotConverged,
          "eigendecomposition of the generator matrix failed");
  vectors_ = solver.eigenvectors();
  values_per_ns_ = solver.eigenvalues() * kMhzToPerNs;

  Eigen::FullPivLU<Eigen::Matrix<std::complex<double>, 5, 5>> lu(vectors_);
  require(lu.isInvertible(), ErrorCode::NotConverged,
          "generator matrix eigenbasis is singular");
  inverse_ = lu.inverse();

  // Reconstruction residual guards against a near-defective eigenbasis.
  const Eigen::Matrix<std::complex<double>, 5, 5> reconstructed =
      vectors_ * solver.eigenvalues().asDiagonal() * inverse_;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double residual =
      (reconstructed - m.cast<std::complex<double>>()).cwiseAbs().maxCoeff() /
      scale;
  if (residual > 1e-10) {
    std::ostringstream msg;
    msg << "eigendecomposition residual " << residual << " exceeds 1e-10";
    fail(ErrorCode::NotConverged, msg.str());
  }
}

Vector5 Propagator::at(const Vector5& pop0, double t_ns) const {
  require(std::isfinite(t_ns) && t_ns >= 0.0, ErrorCode::InvalidInput,
          "evolution time must be >= 0");
  Eigen::Matrix<std::complex<double>, 5, 1> coeffs =
      inverse_ * pop0.cast<std::complex<double>>();
  for (int i = 0; i < 5; ++i)
    coeffs[i] *= std::exp(values_per_ns_[i] * t_ns);
  return (vectors_ * coeffs).real();
}

LevelPopulations Propagator::at(const LevelPopulations& pop0,
                                double t_ns) const {
  pop0.validate();
  return LevelPopulations::from_vector(at(pop0.to_vector(), t_ns));
}

LevelPopulations evolve(const LevelPopulations& pop0, const RateSet& rates,
                        double t_ns) {
  return Propagator(rates).at(pop0, t_ns);
}

LevelPopulations evolve_rk4(const LevelPopulations& pop0, const RateSet& rates,
                            double t_ns) {
  require(std::isfinite(t_ns) && t_ns >= 0.0, ErrorCode::InvalidInput,
          "evolution time must be >= 0");
  pop0.validate();
  const Matrix5 m = generator_matrix(rates) * kMhzToPerNs;  // per ns
  if (t_ns == 0.0) return pop0;

  // Step size keyed to the largest total outflow rate; tighter than accuracy
  // of the propagator itself requires, so the two routes can be compared at
  // the 1e-6 level on small components.
  const double max_outflow = -m.diagonal().minCoeff();
  double h = 0.05;
  if (max_outflow > 0.0) h = std::min(h, 0.015 / max_outflow);
  const auto steps = static_cast<std::size_t>(std::ceil(t_ns / h - 1e-12));
  h = t_ns / static_cast<double>(steps);

  Vector5 p = pop0.to_vector();
  for (std::size_t i = 0; i < steps; ++i) {
    const Vector5 k1 = m * p;
    const Vector5 k2 = m * (p + 0.5 * h * k1);
    const Vector5 k3 = m * (p + 0.5 * h * k2);
    const Vector5 k4 = m * (p + h * k3);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return LevelPopulations::from_vector(p);
}

LevelPopulations steady_state(const RateSet& rates) {
  rates.validate();
  require(rates.k_e > 0.0 && rates.k_f > 0.0, ErrorCode::InvalidInput,
          "steady state requires k_e > 0 and k_f > 0");
  const Matrix5 m = generator_matrix(rates);

  Eigen::FullPivLU<Matrix5> lu(m);
  lu.setThreshold(1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()));
  const auto kernel = lu.kernel();
  require(kernel.cols() == 1, ErrorCode::IllConditioned,
          "generator null space has dimension != 1");

  Vector5 v = kernel.col(0);
  const double total = v.sum();
  require(std::abs(total) > 1e-14, ErrorCode::IllConditioned,
          "null vector has zero total population");
  v /= total;
  return LevelPopulations::from_vector(v);
}

LevelPopulations initialize(const InitMode& mode, const RateSet& rates) {
  rates.validate();
  switch (mode.kind) {
    case InitMode::Kind::Ideal:
      return LevelPopulations{1.0, 0.0, 0.0, 0.0, 0.0};
    case InitMode::Kind::Polarized: {
      const double p = mode.polarization;
      require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
              ErrorCode::InvalidProbability, "polarization must be in [0, 1]");
      return LevelPopulations{p, 1.0 - p, 0.0, 0.0, 0.0};
    }
    case InitMode::Kind::Pumped: {
      require(mode.pump_duration_us >= 0.0 && mode.dark_wait_us >= 0.0,
              ErrorCode::InvalidInput, "pump/dark durations must be >= 0");
      // Laser pump from an unpolarized ground state toward the driven steady
      // state, then a dark wait that drains the singlet into G0.
      LevelPopulations pop{1.0 / 3.0, 2.0 / 3.0, 0.0, 0.0, 0.0};
      pop = evolve(pop, rates, mode.pump_duration_us * 1e3);
      RateSet dark = rates;
      dark.k_e = 0.0;
      pop = evolve(pop, dark, mode.dark_wait_us * 1e3);
      Vector5 v = pop.to_vector();
      v /= v.sum();
      return LevelPopulations::from_vector(v);
    }
  }
  fail(ErrorCode::InvalidInput, "unknown initialization mode");
}

LevelPopulations apply_pi_pulse(const LevelPopulations& pop) {
  pop.validate();
  LevelPopulations swapped = pop;
  std::swap(swapped.g0, swapped.g1);
  return swapped;
}

double fluorescence_rate(const LevelPopulations& pop, const RateSet& rates,
                         bool include_mixing_photons) {
  pop.validate();
  rates.validate();
  double rate = rates.k_f * (pop.e0 + pop.e1);
  if (include_mixing_photons) {
    require(rates.mixing == MixingVariant::RadiativeMixing,
            ErrorCode::InvalidCombination,
            "mixing photons exist only for the radiative-mixing variant");
    rate += 2.0 * rates.k_m * pop.e0 + rates.k_m * pop.e1;
  }
  return rate;
}

TimeTrace readout_trace(const RateSet& rates, Prep prep, const InitMode& init,
                        double duration_ns, double step_ns,
                        bool include_mixing_photons) {
  require(std::isfinite(duration_ns) && duration_ns > 0.0,
          ErrorCode::InvalidInput, "duration must be > 0");
  require(std::isfinite(step_ns) && step_ns > 0.0 && step_ns <= duration_ns,
          ErrorCode::InvalidInput, "step must satisfy 0 < step <= duration");

  LevelPopulations pop = initialize(init, rates);
  if (prep == Prep::Ms1) pop = apply_pi_pulse(pop);

  const Propagator prop(rates);
  const Vector5 p0 = pop.to_vector();

  std::vector<double> times, values;
  const auto intervals =
      static_cast<std::size_t>(std::ceil(duration_ns / step_ns - 1e-12));
  times.reserve(intervals + 1);
  values.reserve(intervals + 1);
  for (std::size_t i = 0; i < intervals; ++i)
    times.push_back(static_cast<double>(i) * step_ns);
  times.push_back(duration_ns);
  for (double t : times) {
    const LevelPopulations p = LevelPopulations::from_vector(prop.at(p0, t));
    values.push_back(fluorescence_rate(p, rates, include_mixing_photons));
  }
  return TimeTrace(std::move(times), std::move(values));
}

TimeTrace contrast_trace(const TimeTrace& trace0, const TimeTrace& trace1,
                         double normalization) {
  trace0.validate();
  trace1.validate();
  require(trace0.size() == trace1.size(), ErrorCode::DimensionMismatch,
          "contrast traces must share a time grid");
  for (std::size_t i = 0; i < trace0.size(); ++i)
    require(trace0.times_ns[i] == trace1.times_ns[i],
            ErrorCode::DimensionMismatch,
            "contrast traces must share a time grid");
  require(std::isfinite(normalization) && normalization > 0.0,
          ErrorCode::InvalidProbability, "normalization must be > 0");

  std::vector<double> values(trace0.size());
  for (std::size_t i = 0; i < trace0.size(); ++i)
    values[i] = (trace0.values[i] - trace1.values[i]) / normalization;
  return TimeTrace(trace0.times_ns, std::move(values));
}

double gated_contrast(const RateSet& rates, const InitMode& init,
                      double gate_start_ns, double gate_width_ns,
                      bool include_mixing_photons) {
  require(std::isfinite(gate_start_ns) && gate_start_ns >= 0.0,
          ErrorCode::InvalidInput, "gate start must be >= 0");
  require(std::isfinite(gate_width_ns) && gate_width_ns > 0.0,
          ErrorCode::InvalidInput, "gate width must be > 0");

  const Propagator prop(rates);
  const LevelPopulations init0 = initialize(init, rates);
  const Vector5 p0 = init0.to_vector();
  const Vector5 p1 = apply_pi_pulse(init0).to_vector();

  const auto intervals =
      static_cast<std::size_t>(std::ceil(gate_width_ns));  // step <= 1 ns
  const double step = gate_width_ns / static_cast<double>(intervals);

  std::vector<double> times(intervals + 1), s0(intervals + 1),
      s1(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double t = gate_start_ns + static_cast<double>(i) * step;
    times[i] = t;
    s0[i] = fluorescence_rate(LevelPopulations::from_vector(prop.at(p0, t)),
                              rates, include_mixing_photons);
    s1[i] = fluorescence_rate(LevelPopulations::from_vector(prop.at(p1, t)),
                              rates, include_mixing_photons);
  }
  const double n0 = trapezoid(times, s0);
  const double n1 = trapezoid(times, s1);
  require(n0 > 0.0, ErrorCode::InvalidInput,
          "gated ms=0 signal vanishes; contrast undefined");
  return (n0 - n1) / n0;
}

double contrast_reduction(const RateSet& rates_off, const RateSet& rates_on,
                          const InitMode& init, double gate_start_ns,
                          double gate_width_ns) {
  const double off = gated_contrast(rates_off, init, gate_start_ns, gate_width_ns);
  const double on = gated_contrast(rates_on, init, gate_start_ns, gate_width_ns);
  require(off != 0.0, ErrorCode::InvalidInput,
          "off-resonance gated contrast is zero");
  return 1.0 - on / off;
}

}  // namespace nvcavity::levels
