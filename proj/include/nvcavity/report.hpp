// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nvcavity::report {

enum class Format { Text, Csv };

Format format_by_name(const std::string& name);

/// Deterministic key/value report. Every numeric entry carries a unit (or is
/// explicitly dimensionless) and the provenance of its value: "config",
/// "default", "computed", or "file".
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void add(const std::string& key, double value, const std::string& unit,
           const std::string& source);
  void add_int(const std::string& key, std::int64_t value,
               const std::string& unit, const std::string& source);
  void add_text(const std::string& key, const std::string& value,
                const std::string& source);

  std::string render(Format format) const;

 private:
  struct Entry {
    std::string key, value, unit, source;
  };
  std::string command_;
  std::vector<Entry> entries_;
};

}  // namespace nvcavity::report
