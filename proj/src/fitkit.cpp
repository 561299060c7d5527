// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/fitkit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace nvcavity::fitkit {

namespace {

constexpr double kLambda0 = 1e-3;
constexpr double kLambdaGrow = 10.0;
constexpr double kLambdaShrink = 3.0;
constexpr double kLambdaMax = 1e12;
constexpr double kGradientTol = 1e-10;
constexpr double kStepTol = 1e-8;
constexpr int kMaxIterations = 500;

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

double diff_step(double p) { return 1e-6 * std::max(std::abs(p), 1.0); }

bool eval_residuals(const ResidualProblem& prob, const Eigen::VectorXd& p,
                    Eigen::VectorXd& r) {
  if (!p.allFinite()) return false;
  if (prob.valid &&
      !prob.valid(std::span<const double>(p.data(), p.size())))
    return false;
  r.resize(static_cast<Eigen::Index>(prob.residual_count));
  if (!prob.residuals(std::span<const double>(p.data(), p.size()),
                      std::span<double>(r.data(), r.size())))
    return false;
  return r.allFinite();
}

// Central differences with one-sided fallback at the domain boundary.
bool numeric_jacobian_into(const ResidualProblem& prob,
                           const Eigen::VectorXd& p, const Eigen::VectorXd& r0,
                           Eigen::MatrixXd& jac) {
  const auto n = static_cast<Eigen::Index>(prob.residual_count);
  const auto k = p.size();
  jac.resize(n, k);
  Eigen::VectorXd plus(n), minus(n), probe = p;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double h = diff_step(p[j]);
    probe[j] = p[j] + h;
    const bool ok_plus = eval_residuals(prob, probe, plus);
    probe[j] = p[j] - h;
    const bool ok_minus = eval_residuals(prob, probe, minus);
    probe[j] = p[j];
    if (ok_plus && ok_minus) {
      jac.col(j) = (plus - minus) / (2.0 * h);
    } else if (ok_plus) {
      jac.col(j) = (plus - r0) / h;
    } else if (ok_minus) {
      jac.col(j) = (r0 - minus) / h;
    } else {
      return false;
    }
  }
  return true;
}

bool jacobian_into(const ResidualProblem& prob, const Eigen::VectorXd& p,
                   const Eigen::VectorXd& r0, Eigen::MatrixXd& jac) {
  if (prob.jacobian) {
    const auto n = static_cast<Eigen::Index>(prob.residual_count);
    const auto k = p.size();
    std::vector<double> rows(static_cast<std::size_t>(n * k));  // row-major
    if (!prob.jacobian(std::span<const double>(p.data(), p.size()),
                       std::span<double>(rows)))
      return false;
    jac = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>(rows.data(), n, k);
    return jac.allFinite();
  }
  return numeric_jacobian_into(prob, p, r0, jac);
}

FitResult package(const ResidualProblem& prob, const Eigen::VectorXd& p,
                  double ssr, bool converged, int iterations) {
  FitResult out;
  for (std::size_t j = 0; j < prob.names.size(); ++j)
    out.params[prob.names[j]] = p[static_cast<Eigen::Index>(j)];
  out.residual_norm = std::sqrt(std::max(ssr, 0.0));
  out.converged = converged;
  out.iterations = iterations;
  return out;
}

void attach_stderrs(const ResidualProblem& prob, const Eigen::VectorXd& p,
                    const Eigen::VectorXd& r, FitResult& out) {
  Eigen::MatrixXd jac;
  if (!jacobian_into(prob, p, r, jac)) return;
  const auto n = static_cast<double>(prob.residual_count);
  const auto k = static_cast<double>(p.size());
  const double dof = n - k;
  const double variance = dof > 0 ? r.squaredNorm() / dof : 0.0;
  const Eigen::MatrixXd covariance =
      variance *
      (jac.transpose() * jac).completeOrthogonalDecomposition().pseudoInverse();
  for (std::size_t j = 0; j < prob.names.size(); ++j) {
    const double var_j = covariance(static_cast<Eigen::Index>(j),
                                    static_cast<Eigen::Index>(j));
    out.stderrs[prob.names[j]] = std::sqrt(std::max(var_j, 0.0));
  }
}

}  // namespace

Spectrum::Spectrum(Unit u, std::vector<double> abscissa,
                   std::vector<double> intensity)
    : unit(u), x(std::move(abscissa)), y(std::move(intensity)) {
  validate();
}

void Spectrum::validate() const {
  require(x.size() == y.size(), ErrorCode::DimensionMismatch,
          "spectrum abscissa and intensity lengths differ");
  require(x.size() >= 4, ErrorCode::InvariantViolation,
          "spectrum needs at least 4 samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(std::isfinite(x[i]) && std::isfinite(y[i]),
            ErrorCode::NonFiniteInput, "spectrum contains non-finite entries");
    require(y[i] >= 0.0, ErrorCode::InvariantViolation,
            "spectrum intensities must be nonnegative");
    if (i > 0)
      require(x[i] > x[i - 1], ErrorCode::InvariantViolation,
              "spectrum abscissa must be strictly increasing");
  }
}

double FitResult::param(const std::string& name) const {
  const auto it = params.find(name);
  require(it != params.end(), ErrorCode::InvalidInput,
          "unknown fit parameter " + name);
  return it->second;
}

double FitResult::stderr_of(const std::string& name) const {
  const auto it = stderrs.find(name);
  require(it != stderrs.end(), ErrorCode::InvalidInput,
          "no standard error for parameter " + name);
  return it->second;
}

FitResult fit_residuals(const ResidualProblem& prob,
                        std::span<const double> initial_guess) {
  const auto k = static_cast<Eigen::Index>(prob.names.size());
  require(k > 0 && prob.residual_count >= prob.names.size(),
          ErrorCode::InvalidInput, "underdetermined fit problem");
  require(initial_guess.size() == prob.names.size(), ErrorCode::InvalidInput,
          "initial guess size does not match parameter count");

  Eigen::VectorXd p =
      Eigen::Map<const Eigen::VectorXd>(initial_guess.data(), k);
  Eigen::VectorXd r;
  require(eval_residuals(prob, p, r), ErrorCode::InvalidInput,
          "initial guess outside the model domain");
  double ssr = r.squaredNorm();

  double lambda = kLambda0;
  bool converged = false;
  int iterations = 0;
  Eigen::MatrixXd jac;
  Eigen::VectorXd r_trial;

  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    iterations = iter;
    if (!jacobian_into(prob, p, r, jac))
      fail(ErrorCode::IllConditioned, "Jacobian evaluation failed");
    const Eigen::VectorXd gradient = jac.transpose() * r;
    if (gradient.lpNorm<Eigen::Infinity>() < kGradientTol) {
      converged = true;
      break;
    }

    const Eigen::MatrixXd normal = jac.transpose() * jac;
    Eigen::VectorXd damping = normal.diagonal();
    const double diag_max = damping.maxCoeff();
    const double diag_floor = std::max(1e-12 * diag_max, 1e-300);
    damping = damping.cwiseMax(diag_floor);

    bool stepped = false;
    while (lambda <= kLambdaMax) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal() += lambda * damping;
      const Eigen::VectorXd delta = damped.ldlt().solve(-gradient);
      if (!delta.allFinite()) {
        lambda *= kLambdaGrow;
        if (lambda > kLambdaMax)
          fail(ErrorCode::IllConditioned,
               "normal equations singular beyond damping recovery");
        continue;
      }
      const Eigen::VectorXd p_trial = p + delta;
      if (eval_residuals(prob, p_trial, r_trial) &&
          r_trial.squaredNorm() <= ssr) {
        double step = 0.0;
        for (Eigen::Index j = 0; j < k; ++j)
          step = std::max(step, std::abs(delta[j]) /
                                    std::max(std::abs(p_trial[j]), 1.0));
        p = p_trial;
        r = r_trial;
        ssr = r.squaredNorm();
        lambda = std::max(lambda / kLambdaShrink, 1e-15);
        stepped = true;
        if (step < kStepTol) converged = true;
        break;
      }
      lambda *= kLambdaGrow;
    }
    if (!stepped) break;  // damping exhausted without progress
    if (converged) break;
  }

  FitResult out = package(prob, p, ssr, converged, iterations);
  if (converged) attach_stderrs(prob, p, r, out);
  return out;
}

std::vector<double> numeric_jacobian(const ResidualProblem& prob,
                                     std::span<const double> p) {
  Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(
      p.data(), static_cast<Eigen::Index>(p.size()));
  Eigen::VectorXd r;
  require(eval_residuals(prob, pv, r), ErrorCode::InvalidInput,
          "parameters outside the model domain");
  Eigen::MatrixXd jac;
  require(numeric_jacobian_into(prob, pv, r, jac), ErrorCode::IllConditioned,
          "numeric Jacobian evaluation failed");
  std::vector<double> out(prob.residual_count * prob.names.size());
  for (Eigen::Index i = 0; i < jac.rows(); ++i)
    for (Eigen::Index j = 0; j < jac.cols(); ++j)
      out[static_cast<std::size_t>(i) * prob.names.size() +
          static_cast<std::size_t>(j)] = jac(i, j);
  return out;
}

ResidualProblem curve_problem(const CurveModel& model,
                              std::span<const double> x,
                              std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::DimensionMismatch,
          "x and y lengths differ");
  ResidualProblem prob;
  prob.residual_count = x.size();
  prob.names = model.names;
  prob.residuals = [&model, x, y](std::span<const double> p,
                                  std::span<double> r) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      r[i] = model.eval(x[i], p) - y[i];
      if (!std::isfinite(r[i])) return false;
    }
    return true;
  };
  if (model.grad) {
    const std::size_t k = model.names.size();
    prob.jacobian = [&model, x, k](std::span<const double> p,
                                   std::span<double> jac) {
      for (std::size_t i = 0; i < x.size(); ++i)
        model.grad(x[i], p, jac.subspan(i * k, k));
      return true;
    };
  }
  prob.valid = model.valid;
  return prob;
}

FitResult fit_curve(const CurveModel& model, std::span<const double> x,
                    std::span<const double> y,
                    std::span<const double> initial_guess) {
  return fit_residuals(curve_problem(model, x, y), initial_guess);
}

// --- curve model catalog ----------------------------------------------------

namespace {

using std::numbers::pi;

const CurveModel kLorentzian{
    "lorentzian",
    {"center", "fwhm", "area", "offset"},
    [](double x, std::span<const double> p) {
      const double u = x - p[0], w = p[1];
      return p[3] + (2.0 * p[2] / pi) * w / (4.0 * u * u + w * w);
    },
    [](double x, std::span<const double> p, std::span<double> g) {
      const double u = x - p[0], w = p[1], a = p[2];
      const double den = 4.0 * u * u + w * w;
      g[0] = (2.0 * a / pi) * w * 8.0 * u / (den * den);
      g[1] = (2.0 * a / pi) * (4.0 * u * u - w * w) / (den * den);
      g[2] = (2.0 / pi) * w / den;
      g[3] = 1.0;
    },
    [](std::span<const double> p) { return p[1] > 0.0; },
};

// Peak amplitude <-> area conversion for a Gaussian of given FWHM.
const double kGaussNorm = std::sqrt(4.0 * std::numbers::ln2 / pi);

double gauss_shape(double u, double w) {
  const double z = u / w;
  return std::exp(-4.0 * std::numbers::ln2 * z * z);
}

const CurveModel kGaussian{
    "gaussian",
    {"center", "fwhm", "area", "offset"},
    [](double x, std::span<const double> p) {
      return p[3] + p[2] * kGaussNorm / p[1] * gauss_shape(x - p[0], p[1]);
    },
    [](double x, std::span<const double> p, std::span<double> g) {
      const double u = x - p[0], w = p[1], a = p[2];
      const double e = gauss_shape(u, w);
      const double common = a * kGaussNorm * e;
      g[0] = common / w * 8.0 * std::numbers::ln2 * u / (w * w);
      g[1] = common * (8.0 * std::numbers::ln2 * u * u - w * w) / (w * w * w * w);
      g[2] = kGaussNorm / w * e;
      g[3] = 1.0;
    },
    [](std::span<const double> p) { return p[1] > 0.0; },
};

const CurveModel kGaussian2{
    "gaussian2",
    {"center1", "fwhm1", "area1", "center2", "fwhm2", "area2", "offset"},
    [](double x, std::span<const double> p) {
      return p[6] + p[2] * kGaussNorm / p[1] * gauss_shape(x - p[0], p[1]) +
             p[5] * kGaussNorm / p[4] * gauss_shape(x - p[3], p[4]);
    },
    [](double x, std::span<const double> p, std::span<double> g) {
      for (int peak = 0; peak < 2; ++peak) {
        const int b = 3 * peak;
        const double u = x - p[b], w = p[b + 1], a = p[b + 2];
        const double e = gauss_shape(u, w);
        const double common = a * kGaussNorm * e;
        g[b] = common / w * 8.0 * std::numbers::ln2 * u / (w * w);
        g[b + 1] =
            common * (8.0 * std::numbers::ln2 * u * u - w * w) / (w * w * w * w);
        g[b + 2] = kGaussNorm / w * e;
      }
      g[6] = 1.0;
    },
    [](std::span<const double> p) { return p[1] > 0.0 && p[4] > 0.0; },
};

const CurveModel kOdmr{
    "odmr",
    {"center1", "center2", "depth1", "depth2", "fwhm1", "fwhm2", "baseline"},
    [](double x, std::span<const double> p) {
      double value = p[6];
      for (int dip = 0; dip < 2; ++dip) {
        const double u = x - p[dip], w = p[4 + dip];
        value -= p[2 + dip] * w * w / (4.0 * u * u + w * w);
      }
      return value;
    },
    [](double x, std::span<const double> p, std::span<double> g) {
      for (int dip = 0; dip < 2; ++dip) {
        const double u = x - p[dip], w = p[4 + dip], d = p[2 + dip];
        const double den = 4.0 * u * u + w * w;
        g[dip] = -d * 8.0 * u * w * w / (den * den);
        g[2 + dip] = -w * w / den;
        g[4 + dip] = -d * 8.0 * u * u * w / (den * den);
      }
      g[6] = 1.0;
    },
    [](std::span<const double> p) { return p[4] > 0.0 && p[5] > 0.0; },
};

const CurveModel kRabi{
    "rabi",
    {"amplitude", "period", "phase", "decay_time", "offset"},
    [](double t, std::span<const double> p) {
      const double theta = 2.0 * pi * t / p[1] + p[2];
      return p[4] + p[0] * std::exp(-t / p[3]) * std::cos(theta);
    },
    [](double t, std::span<const double> p, std::span<double> g) {
      const double theta = 2.0 * pi * t / p[1] + p[2];
      const double damp = std::exp(-t / p[3]);
      const double c = std::cos(theta), s = std::sin(theta);
      g[0] = damp * c;
      g[1] = p[0] * damp * s * 2.0 * pi * t / (p[1] * p[1]);
      g[2] = -p[0] * damp * s;
      g[3] = p[0] * damp * c * t / (p[3] * p[3]);
      g[4] = 1.0;
    },
    [](std::span<const double> p) { return p[1] > 0.0 && p[3] > 0.0; },
};

const CurveModel kDoubleExp{
    "double_exp",
    {"a1", "tau1", "a2", "tau2", "offset"},
    [](double t, std::span<const double> p) {
      return p[4] + p[0] * std::exp(-t / p[1]) + p[2] * std::exp(-t / p[3]);
    },
    [](double t, std::span<const double> p, std::span<double> g) {
      const double e1 = std::exp(-t / p[1]), e2 = std::exp(-t / p[3]);
      g[0] = e1;
      g[1] = p[0] * e1 * t / (p[1] * p[1]);
      g[2] = e2;
      g[3] = p[2] * e2 * t / (p[3] * p[3]);
      g[4] = 1.0;
    },
    [](std::span<const double> p) { return p[1] > 0.0 && p[3] > 0.0; },
};

const CurveModel kSaturation{
    "saturation",
    {"i_inf", "p_sat", "background_slope"},
    [](double power, std::span<const double> p) {
      return p[0] * power / (power + p[1]) + p[2] * power;
    },
    [](double power, std::span<const double> p, std::span<double> g) {
      const double den = power + p[1];
      g[0] = power / den;
      g[1] = -p[0] * power / (den * den);
      g[2] = power;
    },
    [](std::span<const double> p) { return p[1] > 0.0; },
};

const CurveModel* kModels[] = {&kLorentzian, &kGaussian, &kGaussian2, &kOdmr,
                               &kRabi,       &kDoubleExp, &kSaturation};

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(
      std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(
      std::distance(v.begin(), std::min_element(v.begin(), v.end())));
}

double fit_rms(const FitResult& fit, std::size_t n) {
  return fit.residual_norm / std::sqrt(static_cast<double>(n));
}

void rename_swap(FitResult& fit, const std::string& a, const std::string& b) {
  std::swap(fit.params.at(a), fit.params.at(b));
  if (fit.stderrs.count(a) && fit.stderrs.count(b))
    std::swap(fit.stderrs.at(a), fit.stderrs.at(b));
}

}  // namespace

const CurveModel& model_by_id(const std::string& id) {
  for (const CurveModel* m : kModels)
    if (m->id == id) return *m;
  fail(ErrorCode::InvalidInput, "unknown curve model '" + id + "'");
}

std::vector<std::string> model_ids() {
  std::vector<std::string> ids;
  for (const CurveModel* m : kModels) ids.push_back(m->id);
  return ids;
}

// --- auto-seeded fits --------------------------------------------------------

namespace {

// Shared peak seeding: center at the extremum sample, fwhm at half the data
// span, offset at the median intensity.
FitResult fit_single_peak(const CurveModel& model, const Spectrum& s,
                          double amp_to_area) {
  s.validate();
  const std::size_t peak = argmax(s.y);
  const double offset0 = median_of(s.y);
  const double fwhm0 = 0.5 * (s.x.back() - s.x.front());
  const double amp0 = s.y[peak] - offset0;
  const double area0 = amp0 * fwhm0 * amp_to_area;
  const double guess[] = {s.x[peak], fwhm0, area0, offset0};
  FitResult fit = fit_curve(model, s.x, s.y, guess);

  const double fwhm = fit.param("fwhm");
  const double amplitude = model.id == "lorentzian"
                               ? (2.0 * fit.param("area") / pi) / fwhm
                               : fit.param("area") * kGaussNorm / fwhm;
  if (!(amplitude > 3.0 * fit_rms(fit, s.size())))
    fail(ErrorCode::NoPeakFound, "no significant peak above the noise floor");
  if (fit.param("center") < s.x.front() || fit.param("center") > s.x.back())
    fail(ErrorCode::NoPeakFound, "fitted peak center left the data range");
  return fit;
}

}  // namespace

FitResult fit_lorentzian(const Spectrum& s) {
  return fit_single_peak(kLorentzian, s, pi / 2.0);
}

FitResult fit_gaussian(const Spectrum& s) {
  return fit_single_peak(kGaussian, s, 1.0 / kGaussNorm);
}

FitResult fit_two_gaussians(const Spectrum& s) {
  s.validate();
  const double span = s.x.back() - s.x.front();
  const double offset0 = median_of(s.y);
  const std::size_t first = argmax(s.y);

  // Second seed: highest sample at least span/8 away from the first peak.
  std::size_t second = first;
  double best = -1.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s.x[i] - s.x[first]) < span / 8.0) continue;
    if (s.y[i] > best) {
      best = s.y[i];
      second = i;
    }
  }
  require(second != first, ErrorCode::NoPeakFound,
          "could not seed two separated peaks");

  const double w0 = span / 10.0;
  double c1 = s.x[first], c2 = s.x[second];
  double a1 = (s.y[first] - offset0) * w0 / kGaussNorm;
  double a2 = (s.y[second] - offset0) * w0 / kGaussNorm;
  if (c1 > c2) {
    std::swap(c1, c2);
    std::swap(a1, a2);
  }
  const double guess[] = {c1, w0, a1, c2, w0, a2, offset0};
  FitResult fit = fit_curve(kGaussian2, s.x, s.y, guess);

  if (fit.param("center1") > fit.param("center2")) {
    rename_swap(fit, "center1", "center2");
    rename_swap(fit, "fwhm1", "fwhm2");
    rename_swap(fit, "area1", "area2");
  }
  const double rms = fit_rms(fit, s.size());
  for (int peak = 1; peak <= 2; ++peak) {
    const std::string tag = std::to_string(peak);
    const double amp = fit.param("area" + tag) * kGaussNorm / fit.param("fwhm" + tag);
    if (!(amp > 3.0 * rms))
      fail(ErrorCode::NoPeakFound, "peak " + tag + " not significant");
  }
  return fit;
}

FitResult fit_odmr(const Spectrum& s) {
  s.validate();
  require(s.unit == Spectrum::Unit::Gigahertz, ErrorCode::InvalidInput,
          "ODMR fits require a GHz abscissa");
  const double span = s.x.back() - s.x.front();
  const double baseline0 = median_of(s.y);
  const std::size_t first = argmin(s.y);

  std::size_t second = first;
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s.x[i] - s.x[first]) < span / 10.0) continue;
    if (s.y[i] < lowest) {
      lowest = s.y[i];
      second = i;
    }
  }
  require(second != first, ErrorCode::NoPeakFound,
          "could not seed two separated dips");

  double c1 = s.x[first], c2 = s.x[second];
  double d1 = std::max(baseline0 - s.y[first], 1e-12);
  double d2 = std::max(baseline0 - s.y[second], 1e-12);
  if (c1 > c2) {
    std::swap(c1, c2);
    std::swap(d1, d2);
  }
  const double w0 = span / 50.0;
  const double guess[] = {c1, c2, d1, d2, w0, w0, baseline0};
  FitResult fit = fit_curve(kOdmr, s.x, s.y, guess);

  if (fit.param("center1") > fit.param("center2")) {
    rename_swap(fit, "center1", "center2");
    rename_swap(fit, "depth1", "depth2");
    rename_swap(fit, "fwhm1", "fwhm2");
  }
  const double rms = fit_rms(fit, s.size());
  const double separation = fit.param("center2") - fit.param("center1");
  const double widths = 0.5 * (fit.param("fwhm1") + fit.param("fwhm2"));
  if (!(fit.param("depth1") > 3.0 * rms) ||
      !(fit.param("depth2") > 3.0 * rms) || separation < widths)
    fail(ErrorCode::NoPeakFound, "fewer than two significant dips");
  return fit;
}

FitResult fit_rabi(const levels::TimeTrace& t) {
  t.validate();
  require(t.size() >= 8, ErrorCode::InvalidInput,
          "Rabi fit needs at least 8 samples");
  const double span = t.times_ns.back() - t.times_ns.front();
  const std::size_t n = t.size();

  double mean = 0.0;
  for (double v : t.values) mean += v;
  mean /= static_cast<double>(n);

  // Dominant bin of the discrete spectrum seeds the period.
  std::size_t best_k = 1;
  double best_power = -1.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    const double omega = 2.0 * pi * static_cast<double>(k) / span;
    for (std::size_t i = 0; i < n; ++i) {
      const double centered = t.values[i] - mean;
      re += centered * std::cos(omega * t.times_ns[i]);
      im += centered * std::sin(omega * t.times_ns[i]);
    }
    const double power = re * re + im * im;
    if (power > best_power) {
      best_power = power;
      best_k = k;
    }
  }
  const double period0 = span / static_cast<double>(best_k);
  require(span >= 2.0 * period0, ErrorCode::InvalidInput,
          "trace spans fewer than two periods of the initial-guess period");

  const auto [min_it, max_it] =
      std::minmax_element(t.values.begin(), t.values.end());
  const double amp0 = 0.5 * (*max_it - *min_it);
  const double guess[] = {amp0, period0, 0.0, span / 2.0, mean};
  FitResult fit = fit_curve(kRabi, t.times_ns, t.values, guess);

  if (!(std::abs(fit.param("amplitude")) > 3.0 * fit_rms(fit, n)))
    fail(ErrorCode::NoPeakFound, "oscillation amplitude below the noise floor");

  fit.params["pi_time"] = 0.5 * fit.param("period");
  if (fit.stderrs.count("period"))
    fit.stderrs["pi_time"] = 0.5 * fit.stderrs.at("period");
  return fit;
}

FitResult fit_double_exponential(const levels::TimeTrace& t) {
  t.validate();
  require(t.size() >= 6, ErrorCode::InvalidInput,
          "double-exponential fit needs at least 6 samples");
  for (double v : t.values)
    require(v >= 0.0, ErrorCode::InvalidInput,
            "decay trace values must be nonnegative");

  const std::size_t n = t.size();
  double tail = 0.0;
  const std::size_t tail_count = std::max<std::size_t>(n / 10, 1);
  for (std::size_t i = n - tail_count; i < n; ++i) tail += t.values[i];
  const double offset0 = tail / static_cast<double>(tail_count);

  const double start = t.values.front() - offset0;
  const double span = t.times_ns.back() - t.times_ns.front();
  double tau_est = span / 2.0;
  if (start > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (t.values[i] - offset0 <= start / std::numbers::e) {
        tau_est = std::max(t.times_ns[i] - t.times_ns.front(),
                           span / static_cast<double>(n));
        break;
      }
    }
  }
  const double amp = std::max(start, 1e-12);
  const double guess[] = {0.5 * amp, 2.0 * tau_est, 0.5 * amp, 0.5 * tau_est,
                          offset0};
  FitResult fit = fit_curve(kDoubleExp, t.times_ns, t.values, guess);

  if (fit.param("tau1") < fit.param("tau2")) {
    rename_swap(fit, "a1", "a2");
    rename_swap(fit, "tau1", "tau2");
  }
  const double rms = fit_rms(fit, n);
  const bool a2_significant = std::abs(fit.param("a2")) > 3.0 * rms;
  const double tau1 = fit.param("tau1"), tau2 = fit.param("tau2");
  if (a2_significant && std::abs(tau1 - tau2) < 0.05 * tau1) {
    std::ostringstream msg;
    msg << "decay constants " << tau1 << " and " << tau2
        << " ns indistinguishable (within 5%)";
    fail(ErrorCode::IllConditioned, msg.str());
  }
  return fit;
}

void SaturationData::validate() const {
  require(power_mw.size() == rate_khz.size(), ErrorCode::DimensionMismatch,
          "power and count lengths differ");
  require(power_mw.size() >= 4, ErrorCode::InvalidInput,
          "saturation fit needs at least 4 points");
  for (std::size_t i = 0; i < power_mw.size(); ++i) {
    require(std::isfinite(power_mw[i]) && std::isfinite(rate_khz[i]),
            ErrorCode::NonFiniteInput, "saturation data must be finite");
    require(power_mw[i] > 0.0, ErrorCode::InvalidInput,
            "powers must be > 0");
  }
}

FitResult fit_saturation(const SaturationData& data) {
  data.validate();
  const double i_inf0 = *std::max_element(data.rate_khz.begin(),
                                          data.rate_khz.end());
  const double p_sat0 = median_of(data.power_mw);
  const double guess[] = {std::max(i_inf0, 1e-12), p_sat0, 0.0};
  FitResult fit = fit_curve(kSaturation, data.power_mw, data.rate_khz, guess);

  if (fit.converged && fit.stderrs.count("p_sat") &&
      fit.stderr_of("p_sat") > std::abs(fit.param("p_sat")))
    fail(ErrorCode::IllConditioned,
         "saturation power unresolved (uncertainty exceeds the value)");
  return fit;
}

FitResult fit_rates(const levels::TimeTrace& trace0,
                    const levels::TimeTrace& trace1, double k_f_fixed,
                    levels::MixingVariant variant,
                    const levels::InitMode& init) {
  trace0.validate();
  trace1.validate();
  require(trace0.size() == trace1.size(), ErrorCode::DimensionMismatch,
          "prepared-state traces must share a time grid");
  for (std::size_t i = 0; i < trace0.size(); ++i)
    require(trace0.times_ns[i] == trace1.times_ns[i],
            ErrorCode::DimensionMismatch,
            "prepared-state traces must share a time grid");
  require(std::isfinite(k_f_fixed) && k_f_fixed > 0.0, ErrorCode::InvalidInput,
          "k_f must be > 0");

  double scale = 0.0, max_diff = 0.0;
  for (std::size_t i = 0; i < trace0.size(); ++i) {
    scale = std::max({scale, std::abs(trace0.values[i]),
                      std::abs(trace1.values[i])});
    max_diff = std::max(max_diff,
                        std::abs(trace0.values[i] - trace1.values[i]));
  }
  require(max_diff > 1e-9 * std::max(scale, 1e-300), ErrorCode::IllConditioned,
          "traces carry no contrast information");

  const std::size_t n = trace0.size();
  ResidualProblem prob;
  prob.residual_count = 2 * n;
  prob.names = {"k_0", "k_s", "k_m"};
  prob.valid = [](std::span<const double> p) {
    return p[0] >= 0.0 && p[1] >= 0.0 && p[2] >= 0.0;
  };
  prob.residuals = [&, k_f_fixed, variant, init](std::span<const double> p,
                                                 std::span<double> r) {
    levels::RateSet rates;
    rates.k_e = k_f_fixed;
    rates.k_f = k_f_fixed;
    rates.k_0 = p[0];
    rates.k_s = p[1];
    rates.k_m = p[2];
    rates.mixing = variant;
    try {
      const levels::Propagator prop(rates);
      levels::LevelPopulations pop = levels::initialize(init, rates);
      const levels::Vector5 p0 = pop.to_vector();
      const levels::Vector5 p1 = levels::apply_pi_pulse(pop).to_vector();
      for (std::size_t i = 0; i < n; ++i) {
        const double t = trace0.times_ns[i];
        r[i] = levels::fluorescence_rate(
                   levels::LevelPopulations::from_vector(prop.at(p0, t)),
                   rates) -
               trace0.values[i];
        r[n + i] = levels::fluorescence_rate(
                       levels::LevelPopulations::from_vector(prop.at(p1, t)),
                       rates) -
                   trace1.values[i];
      }
    } catch (const Error&) {
      return false;
    }
    return true;
  };

  const double guess[] = {3.0, 1.0, 0.5};  // MHz
  return fit_residuals(prob, guess);
}

VariantComparison compare_mixing_variants(const levels::TimeTrace& trace0,
                                          const levels::TimeTrace& trace1,
                                          double k_f_fixed,
                                          const levels::InitMode& init) {
  VariantComparison cmp;
  cmp.radiative = fit_rates(trace0, trace1, k_f_fixed,
                            levels::MixingVariant::RadiativeMixing, init);
  cmp.nonradiative =
      fit_rates(trace0, trace1, k_f_fixed,
                levels::MixingVariant::NonRadiativeExcitedMixing, init);
  return cmp;
}

}  // namespace nvcavity::fitkit
