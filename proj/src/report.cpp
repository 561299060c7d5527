// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/report.hpp"

#include <sstream>

#include "nvcavity/csvio.hpp"
#include "nvcavity/errors.hpp"

namespace nvcavity::report {

Format format_by_name(const std::string& name) {
  if (name == "text") return Format::Text;
  if (name == "csv") return Format::Csv;
  fail(ErrorCode::InvalidInput, "unknown report format '" + name + "'");
}

void Report::add(const std::string& key, double value, const std::string& unit,
                 const std::string& source) {
  entries_.push_back({key, csvio::format_number(value), unit, source});
}

void Report::add_int(const std::string& key, std::int64_t value,
                     const std::string& unit, const std::string& source) {
  entries_.push_back({key, std::to_string(value), unit, source});
}

void Report::add_text(const std::string& key, const std::string& value,
                      const std::string& source) {
  entries_.push_back({key, value, "-", source});
}

std::string Report::render(Format format) const {
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "key,value,unit,source\n";
    for (const Entry& e : entries_)
      out << e.key << "," << e.value << "," << e.unit << "," << e.source
          << "\n";
  } else {
    out << "# nvcav " << command_ << " report\n";
    for (const Entry& e : entries_)
      out << e.key << " = " << e.value << " [" << e.unit << "] (" << e.source
          << ")\n";
  }
  return out.str();
}

}  // namespace nvcavity::report
