// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
//
// Regenerates every CSV fixture under fixtures/ deterministically (fixed
// seeds). Run from the repository root:  gen_fixtures [output_dir]
//
// The shipped fixtures are these generator outputs, committed so tests and
// example configs work without a build step.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "nvcavity/cavity.hpp"
#include "nvcavity/collection.hpp"
#include "nvcavity/csvio.hpp"
#include "nvcavity/detail/rng.hpp"
#include "nvcavity/fitkit.hpp"
#include "nvcavity/levels.hpp"

using namespace nvcavity;

namespace {

// Off-resonance rate set used throughout: 9.0 ns lifetime and the fitted
// internal rates, saturated drive (k_e = k_f).
levels::RateSet reference_rates() {
  levels::RateSet rates;
  rates.k_e = 111.0;
  rates.k_f = 111.0;
  rates.k_s = 1.79;
  rates.k_0 = 5.80;
  rates.k_m = 1.35;
  return rates;
}

double lorentz(double x, double center, double fwhm, double area) {
  const double u = x - center;
  return (2.0 * area / std::numbers::pi) * fwhm / (4.0 * u * u + fwhm * fwhm);
}

double gauss(double x, double center, double fwhm, double amplitude) {
  const double z = (x - center) / fwhm;
  return amplitude * std::exp(-4.0 * std::numbers::ln2 * z * z);
}

std::vector<double> grid(double start, double stop, double step) {
  std::vector<double> xs;
  for (double x = start; x <= stop + 1e-9; x += step) xs.push_back(x);
  return xs;
}

void apply_noise(std::vector<double>& values, double sigma, std::uint64_t seed) {
  detail::Rng rng(seed);
  for (double& v : values) v = std::max(v * (1.0 + sigma * rng.normal()), 0.0);
}

void prepend_comment(const std::string& path, const std::string& comment) {
  std::ifstream in(path, std::ios::binary);
  const std::string body((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << comment << body;
}

void write_spectrum(const std::string& path, fitkit::Spectrum::Unit unit,
                    std::vector<double> x, std::vector<double> y,
                    const std::string& comment) {
  csvio::save_spectrum(fitkit::Spectrum(unit, std::move(x), std::move(y)), path);
  prepend_comment(path, comment);
}

void make_mode_spectrum(const std::string& dir) {
  const auto xs = grid(644.0, 645.6, 0.002);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(50.0 + lorentz(x, 644.8, 0.078, 612.6));
  apply_noise(ys, 0.005, 101);
  write_spectrum(dir + "/mode_spectrum.csv", fitkit::Spectrum::Unit::Nanometer,
                 xs, ys,
                 "# Synthetic PL spectrum of a high-Q cavity mode: Lorentzian\n"
                 "# at 644.8 nm, FWHM 0.078 nm (Q = 8266.7), offset 50, 0.5%\n"
                 "# multiplicative noise, seed 101 (tools/gen_fixtures).\n");
}

void make_onres_spectrum(const std::string& dir) {
  const auto xs = grid(630.0, 660.0, 0.02);
  const double mode_fwhm = 637.4 / 2021.0;
  const double mode_area = 4000.0 * std::numbers::pi * mode_fwhm / 2.0;

  const auto build = [&](double background_scale) {
    std::vector<double> ys;
    ys.reserve(xs.size());
    for (double x : xs)
      ys.push_back(lorentz(x, 637.4, mode_fwhm, mode_area) +
                   background_scale * (gauss(x, 648.0, 16.0, 484.0) + 20.0));
    apply_noise(ys, 0.005, 202);
    return ys;
  };
  const auto measured_beta = [&](double background_scale) {
    const fitkit::Spectrum s(fitkit::Spectrum::Unit::Nanometer, xs,
                             build(background_scale));
    return cavity::beta_from_spectrum(cavity::analyze_mode_spectrum(s));
  };

  // beta decreases with the background scale; bisect onto the target 0.183.
  double lo = 0.05, hi = 20.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (measured_beta(mid) > 0.183)
      lo = mid;
    else
      hi = mid;
  }
  const double scale = 0.5 * (lo + hi);
  write_spectrum(
      dir + "/onres_pl_spectrum.csv", fitkit::Spectrum::Unit::Nanometer, xs,
      build(scale),
      "# Synthetic PL spectrum with the cavity mode resonant at 637.4 nm\n"
      "# (FWHM 637.4/2021 nm) on a broad sideband background; the background\n"
      "# level is calibrated so the fitted mode-to-total area ratio is\n"
      "# beta* = 0.183. 0.5% noise, seed 202 (tools/gen_fixtures).\n");
}

void make_ple_spectrum(const std::string& dir) {
  const auto xs = grid(636.2, 638.5, 0.005);
  // 360 GHz linewidth at 637.4 nm expressed in nm.
  const double fwhm = 637.4 * 637.4 * 360.0 / cavity::kSpeedOfLightNmGhz;
  std::vector<double> ys;
  for (double x : xs) ys.push_back(5.0 + lorentz(x, 637.4, fwhm, 100.0 * fwhm));
  apply_noise(ys, 0.01, 303);
  write_spectrum(dir + "/ple_zpl.csv", fitkit::Spectrum::Unit::Nanometer, xs,
                 ys,
                 "# Synthetic PLE scan across the ZPL: Lorentzian at 637.4 nm\n"
                 "# with a 360 GHz (0.487 nm) linewidth, 1% noise, seed 303\n"
                 "# (tools/gen_fixtures).\n");
}

void make_two_line_spectrum(const std::string& dir) {
  // Two emission lines in the frequency domain with 200 and 370 GHz widths.
  const auto xs = grid(469000.0, 471000.0, 4.0);
  std::vector<double> ys;
  for (double x : xs)
    ys.push_back(3.0 + gauss(x, 469700.0, 200.0, 60.0) +
                 gauss(x, 470100.0, 370.0, 45.0));
  apply_noise(ys, 0.01, 404);
  write_spectrum(dir + "/two_line_spectrum.csv",
                 fitkit::Spectrum::Unit::Gigahertz, xs, ys,
                 "# Synthetic two-line emission spectrum (GHz domain):\n"
                 "# Gaussians at 469700/470100 GHz with FWHM 200/370 GHz,\n"
                 "# 1% noise, seed 404 (tools/gen_fixtures).\n");
}

void make_odmr(const std::string& dir) {
  const auto xs = grid(2.75, 3.00, 0.0005);
  std::vector<double> ys;
  for (double x : xs) {
    const double dip1 = 0.04 * lorentz(x, 2.823, 0.008, std::numbers::pi * 0.008 / 2.0);
    const double dip2 = 0.04 * lorentz(x, 2.917, 0.008, std::numbers::pi * 0.008 / 2.0);
    ys.push_back(1.0 - dip1 - dip2);
  }
  apply_noise(ys, 0.003, 505);
  write_spectrum(dir + "/odmr_2mT.csv", fitkit::Spectrum::Unit::Gigahertz, xs,
                 ys,
                 "# Synthetic CW ODMR spectrum at 2 mT: dips at 2.823 and\n"
                 "# 2.917 GHz, 4% depth, 8 MHz FWHM, 0.3% noise, seed 505\n"
                 "# (tools/gen_fixtures).\n");
}

void write_trace(const std::string& path, std::vector<double> t,
                 std::vector<double> v, const std::string& comment) {
  csvio::save_trace(levels::TimeTrace(std::move(t), std::move(v)), path);
  prepend_comment(path, comment);
}

void make_rabi(const std::string& dir) {
  const auto ts = grid(0.0, 4000.0, 10.0);
  std::vector<double> ys;
  for (double t : ts)
    ys.push_back(1.0 + 0.02 * std::exp(-t / 1500.0) *
                           std::cos(2.0 * std::numbers::pi * t / 1100.0));
  apply_noise(ys, 0.002, 606);
  write_trace(dir + "/rabi.csv", ts, ys,
              "# Synthetic Rabi oscillation: period 1100 ns (pi-time 550 ns),\n"
              "# T2* 1.5 us, 2% relative amplitude, 0.2% noise, seed 606\n"
              "# (tools/gen_fixtures).\n");
}

void make_lifetime(const std::string& dir) {
  const auto ts = grid(0.0, 50.0, 0.2);
  std::vector<double> ys;
  for (double t : ts)
    ys.push_back(2.0 + 1000.0 * std::exp(-t / 9.0) + 300.0 * std::exp(-t / 1.0));
  apply_noise(ys, 0.01, 707);
  write_trace(dir + "/lifetime_decay.csv", ts, ys,
              "# Synthetic time-resolved decay: 9.0 ns emitter lifetime plus\n"
              "# a 1.0 ns background component, 1% noise, seed 707\n"
              "# (tools/gen_fixtures).\n");
}

void make_saturation(const std::string& dir) {
  const auto make = [&](const std::string& name, double i_inf, double slope,
                        std::uint64_t seed, const std::string& comment) {
    std::vector<double> powers, rates;
    for (int i = 0; i < 24; ++i) {
      const double p = 0.05 * std::pow(6.0 / 0.05, i / 23.0);
      powers.push_back(p);
      rates.push_back(i_inf * p / (p + 1.0) + slope * p);
    }
    apply_noise(rates, 0.01, seed);
    csvio::save_saturation({powers, rates}, dir + "/" + name);
    prepend_comment(dir + "/" + name, comment);
  };
  make("saturation_offres.csv", 13.6, 0.3, 808,
       "# Synthetic saturation curve, mode detuned: I_inf 13.6 kHz,\n"
       "# P_sat 1.0 mW, background 0.3 kHz/mW, 1% noise, seed 808\n"
       "# (tools/gen_fixtures).\n");
  make("saturation_onres.csv", 37.5, 0.5, 909,
       "# Synthetic saturation curve, mode resonant: I_inf 37.5 kHz,\n"
       "# P_sat 1.0 mW, background 0.5 kHz/mW, 1% noise, seed 909\n"
       "# (tools/gen_fixtures).\n");
}

void make_traces(const std::string& dir) {
  const levels::RateSet rates = reference_rates();
  const levels::InitMode init = levels::InitMode::ideal();
  levels::TimeTrace t0 =
      levels::readout_trace(rates, levels::Prep::Ms0, init, 3000.0, 10.0);
  levels::TimeTrace t1 =
      levels::readout_trace(rates, levels::Prep::Ms1, init, 3000.0, 10.0);
  apply_noise(t0.values, 0.01, 1042);
  apply_noise(t1.values, 0.01, 2042);
  const char* comment =
      "# Synthetic prepared-state fluorescence (five-level model, radiative\n"
      "# mixing): k_e = k_f = 111 MHz, k_s = 1.79 MHz, k_0 = 5.80 MHz,\n"
      "# k_m = 1.35 MHz, ideal ms=0 initialization, 1% multiplicative noise\n"
      "# (seeds 1042/2042, tools/gen_fixtures).\n";
  write_trace(dir + "/fluor_ms0.csv", t0.times_ns, t0.values, comment);
  write_trace(dir + "/fluor_ms1.csv", t1.times_ns, t1.values, comment);
}

void make_efficiency_table(const std::string& dir) {
  // Constant x/z-dipole efficiencies plus a y-dipole dip at the mode
  // wavelength, solved so the dipole-weighted combination is exactly 3.9%
  // at 634.0 nm and 3.4% at 637.4 nm for weights (0.24, 0.24, 0.52).
  const double kx = 0.24, ky = 0.24, kz = 0.52;
  const double eps_x = 0.045, eps_z = 0.030;
  const double dip_center = 637.4, dip_fwhm = 1.5;
  const auto dip_shape = [&](double x) {
    const double u = x - dip_center;
    return dip_fwhm * dip_fwhm / (4.0 * u * u + dip_fwhm * dip_fwhm);
  };
  const double base_combined = kx * eps_x + kz * eps_z;
  const double y_off = (0.039 - base_combined) / ky;   // eps_y at 634.0 nm
  const double y_on = (0.034 - base_combined) / ky;    // eps_y at 637.4 nm
  const double shape_off = dip_shape(634.0);
  const double depth = (y_off - y_on) / (shape_off - 1.0);
  const double base = y_off - depth * shape_off;

  const auto xs = grid(630.0, 645.0, 0.1);
  std::vector<double> ex(xs.size(), eps_x), ey, ez(xs.size(), eps_z);
  for (double x : xs) ey.push_back(base - depth * dip_shape(x));

  csvio::save_efficiency_table(
      collection::EfficiencyTable(xs, ex, ey, ez),
      dir + "/collection_efficiency.csv");
  prepend_comment(
      dir + "/collection_efficiency.csv",
      "# Per-dipole collection efficiencies vs wavelength (FDTD-style\n"
      "# export). The y-dipole feeds the cavity mode and shows the\n"
      "# collection dip at resonance; levels are solved so the weighted\n"
      "# combination for dipole weights (0.24, 0.24, 0.52) equals 0.039 at\n"
      "# 634.0 nm and 0.034 at 637.4 nm (tools/gen_fixtures).\n");
}

void make_golden(const std::string& dir) {
  const levels::RateSet off = reference_rates();
  const levels::RateSet on = off.with_emission_scaled(9.0 / 8.0);
  const double reduction = levels::contrast_reduction(
      off, on, levels::InitMode::ideal(), 0.0, 250.0);
  char buffer[40];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), reduction);
  std::ofstream out(dir + "/golden/contrast_reduction_gate250.txt",
                    std::ios::binary | std::ios::trunc);
  out << "# Relative gated-contrast reduction, gate [0, 250 ns], for the\n"
         "# reference rates when k_e = k_f scale by 9.0/8.0 (ideal init).\n"
      << std::string(buffer, result.ptr) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);
  std::filesystem::create_directories(dir + "/golden");

  make_mode_spectrum(dir);
  make_onres_spectrum(dir);
  make_ple_spectrum(dir);
  make_two_line_spectrum(dir);
  make_odmr(dir);
  make_rabi(dir);
  make_lifetime(dir);
  make_saturation(dir);
  make_traces(dir);
  make_efficiency_table(dir);
  make_golden(dir);

  std::printf("fixtures written to %s\n", dir.c_str());
  return 0;
}
