// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace nvcavity::config {

namespace {

// The full key schema. Unknown sections or keys are load-time errors: a
// silently ignored typo in a rate name would corrupt results downstream.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> kSchema = {
      {"rates", {"k_e", "k_f", "k_s", "k_0", "k_m", "mixing_variant"}},
      {"simulate",
       {"init", "polarized_p", "pump_duration_us", "dark_wait_us",
        "duration_ns", "step_ns", "include_mixing_photons"}},
      {"gate", {"start_ns", "width_ns"}},
      {"cavity",
       {"q_factor", "mode_volume", "wavelength_nm", "refractive_index",
        "emitter_fwhm_ghz", "zpl_fraction"}},
      {"dipole",
       {"k_x", "k_y", "k_z", "purcell_x", "purcell_y", "purcell_z",
        "gamma_mhz"}},
      {"collect", {"wavelength_off_nm", "wavelength_on_nm"}},
      {"scenario",
       {"lifetime_factor", "collection_factor_zpl",
        "collection_factor_broadband", "zpl_fraction_off", "zpl_fraction_on",
        "contrast_ratio", "n0_reference", "contrast_reference"}},
      {"files",
       {"trace_ms0", "trace_ms1", "spectrum", "efficiency_table",
        "saturation_off", "saturation_on"}},
      {"tuning",
       {"current_nm", "target_nm", "red_rate_nm_per_h",
        "blue_shift_per_nm_removed"}},
      {"mc", {"n0", "n1", "trials", "seed"}},
  };
  return kSchema;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

RunConfig RunConfig::empty() {
  RunConfig cfg;
  cfg.base_dir_ = ".";
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open config " + path);

  RunConfig cfg;
  cfg.source_path_ = path;
  const auto parent = std::filesystem::path(path).parent_path();
  cfg.base_dir_ = parent.empty() ? "." : parent.string();

  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;

    std::ostringstream where;
    where << path << " line " << line_no;

    if (text.front() == '[') {
      if (text.back() != ']')
        fail(ErrorCode::ParseError, where.str() + ": malformed section header");
      section = trim(text.substr(1, text.size() - 2));
      if (!schema().count(section))
        fail(ErrorCode::ParseError,
             where.str() + ": unknown section [" + section + "]");
      cfg.sections_[section];
      continue;
    }

    if (section.empty())
      fail(ErrorCode::ParseError,
           where.str() + ": key outside of any [section]");
    const auto equals = text.find('=');
    if (equals == std::string::npos)
      fail(ErrorCode::ParseError, where.str() + ": expected key = value");
    const std::string key = trim(text.substr(0, equals));
    const std::string value = trim(text.substr(equals + 1));
    if (!schema().at(section).count(key))
      fail(ErrorCode::ParseError, where.str() + ": unknown key '" + key +
                                      "' in section [" + section + "]");
    if (value.empty())
      fail(ErrorCode::ParseError, where.str() + ": empty value for '" + key + "'");
    if (cfg.sections_[section].count(key))
      fail(ErrorCode::ParseError,
           where.str() + ": duplicate key '" + key + "'");
    cfg.sections_[section][key] = value;
  }

  // Fail-closed on referenced files: check them all at load time.
  if (cfg.sections_.count("files")) {
    for (const auto& [key, value] : cfg.sections_.at("files")) {
      const std::string resolved = cfg.get_path("files", key);
      if (!std::filesystem::exists(resolved))
        fail(ErrorCode::InvariantViolation,
             "[files]." + key + ": file not found: " + resolved);
    }
  }
  return cfg;
}

bool RunConfig::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool RunConfig::has_key(const std::string& section,
                        const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

const std::string& RunConfig::raw(const std::string& section,
                                  const std::string& key) const {
  const auto sec = sections_.find(section);
  require(sec != sections_.end(), ErrorCode::InvariantViolation,
          "missing config section [" + section + "]");
  const auto it = sec->second.find(key);
  require(it != sec->second.end(), ErrorCode::InvariantViolation,
          "missing config key [" + section + "]." + key);
  return it->second;
}

double RunConfig::get_double(const std::string& section,
                             const std::string& key) const {
  const std::string& text = raw(section, key);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  require(ec == std::errc() && ptr == end, ErrorCode::ParseError,
          "[" + section + "]." + key + ": cannot parse number '" + text + "'");
  return value;
}

double RunConfig::get_double_or(const std::string& section,
                                const std::string& key, double fallback) const {
  return has_key(section, key) ? get_double(section, key) : fallback;
}

std::uint64_t RunConfig::get_uint(const std::string& section,
                                  const std::string& key) const {
  const std::string& text = raw(section, key);
  std::uint64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  require(ec == std::errc() && ptr == end, ErrorCode::ParseError,
          "[" + section + "]." + key + ": cannot parse integer '" + text + "'");
  return value;
}

std::uint64_t RunConfig::get_uint_or(const std::string& section,
                                     const std::string& key,
                                     std::uint64_t fallback) const {
  return has_key(section, key) ? get_uint(section, key) : fallback;
}

bool RunConfig::get_bool_or(const std::string& section, const std::string& key,
                            bool fallback) const {
  if (!has_key(section, key)) return fallback;
  const std::string& text = raw(section, key);
  if (text == "true") return true;
  if (text == "false") return false;
  fail(ErrorCode::ParseError,
       "[" + section + "]." + key + ": expected true or false, got '" + text + "'");
}

std::string RunConfig::get_string(const std::string& section,
                                  const std::string& key) const {
  return raw(section, key);
}

std::string RunConfig::get_string_or(const std::string& section,
                                     const std::string& key,
                                     const std::string& fallback) const {
  return has_key(section, key) ? raw(section, key) : fallback;
}

std::string RunConfig::get_path(const std::string& section,
                                const std::string& key) const {
  const std::filesystem::path value(raw(section, key));
  if (value.is_absolute()) return value.string();
  return (std::filesystem::path(base_dir_) / value).lexically_normal().string();
}

}  // namespace nvcavity::config
