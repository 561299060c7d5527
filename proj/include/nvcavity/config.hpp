// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "nvcavity/errors.hpp"

namespace nvcavity::config {

/// Line-based configuration: `[section]` headers with `key = value` pairs,
/// full-line '#' comments. Section and key names are validated against the
/// known schema at load time; unknown names are errors (fail-closed), as are
/// referenced files that do not exist. Relative file paths resolve against
/// the directory containing the config file.
class RunConfig {
 public:
  static RunConfig load(const std::string& path);
  /// An empty configuration (used when no --config is given).
  static RunConfig empty();

  bool has_section(const std::string& section) const;
  bool has_key(const std::string& section, const std::string& key) const;

  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  std::uint64_t get_uint(const std::string& section,
                         const std::string& key) const;
  std::uint64_t get_uint_or(const std::string& section, const std::string& key,
                            std::uint64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const;
  std::string get_string(const std::string& section,
                         const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  /// Resolved filesystem path (see class comment).
  std::string get_path(const std::string& section, const std::string& key) const;

  const std::string& source_path() const { return source_path_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string source_path_;
  std::string base_dir_;

  const std::string& raw(const std::string& section,
                         const std::string& key) const;
};

}  // namespace nvcavity::config
