// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/csvio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace nvcavity::csvio {

namespace {

struct Table {
  std::vector<std::vector<double>> columns;
  std::size_t rows = 0;
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_field(const std::string& field, const std::string& path,
                   std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    std::ostringstream msg;
    msg << path << " line " << line_no << ": cannot parse number '" << field
        << "'";
    fail(ErrorCode::ParseError, msg.str());
  }
  return value;
}

// Reads a CSV file with the exact expected header (after optional leading
// '#' comment lines) into per-column vectors.
Table read_csv(const std::string& path, const std::string& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);

  Table table;
  const std::size_t n_cols = split_fields(expected_header).size();
  table.columns.resize(n_cols);

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    if (!header_seen) {
      if (!line.empty() && line.front() == '#') continue;  // provenance notes
      if (line != expected_header) {
        std::ostringstream msg;
        msg << path << " line " << line_no << ": expected header '"
            << expected_header << "', got '" << line << "'";
        fail(ErrorCode::ParseError, msg.str());
      }
      header_seen = true;
      continue;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != n_cols) {
      std::ostringstream msg;
      msg << path << " line " << line_no << ": expected " << n_cols
          << " columns, got " << fields.size();
      fail(ErrorCode::ParseError, msg.str());
    }
    for (std::size_t c = 0; c < n_cols; ++c)
      table.columns[c].push_back(parse_field(fields[c], path, line_no));
    ++table.rows;
  }
  if (!header_seen)
    fail(ErrorCode::ParseError, path + ": missing header row");
  return table;
}

void require_increasing(const std::vector<double>& column,
                        const std::string& path, const std::string& what) {
  for (std::size_t i = 1; i < column.size(); ++i) {
    if (!(column[i] > column[i - 1])) {
      std::ostringstream msg;
      msg << path << " data row " << (i + 1) << ": " << what
          << " not strictly increasing";
      fail(ErrorCode::InvariantViolation, msg.str());
    }
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

constexpr const char* kTraceHeader = "time_ns,signal";
constexpr const char* kSpectrumNmHeader = "wavelength_nm,intensity";
constexpr const char* kSpectrumGhzHeader = "frequency_ghz,intensity";
constexpr const char* kTableHeader = "wavelength_nm,eps_x,eps_y,eps_z";
constexpr const char* kSaturationHeader = "power_mw,rate_khz";

}  // namespace

std::string format_number(double value) {
  char buffer[40];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::general, 9);
  return std::string(buffer, result.ptr);
}

levels::TimeTrace load_trace(const std::string& path) {
  Table t = read_csv(path, kTraceHeader);
  require_increasing(t.columns[0], path, "time_ns");
  return levels::TimeTrace(std::move(t.columns[0]), std::move(t.columns[1]));
}

void save_trace(const levels::TimeTrace& trace, const std::string& path) {
  trace.validate();
  std::ostringstream out;
  out << kTraceHeader << "\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << format_number(trace.times_ns[i]) << ","
        << format_number(trace.values[i]) << "\n";
  write_file(path, out.str());
}

fitkit::Spectrum load_spectrum(const std::string& path) {
  // Peek at the header to pick the unit.
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    break;
  }
  const bool ghz = line == kSpectrumGhzHeader;
  Table t = read_csv(path, ghz ? kSpectrumGhzHeader : kSpectrumNmHeader);
  require_increasing(t.columns[0], path, ghz ? "frequency_ghz" : "wavelength_nm");
  return fitkit::Spectrum(ghz ? fitkit::Spectrum::Unit::Gigahertz
                              : fitkit::Spectrum::Unit::Nanometer,
                          std::move(t.columns[0]), std::move(t.columns[1]));
}

void save_spectrum(const fitkit::Spectrum& spectrum, const std::string& path) {
  spectrum.validate();
  std::ostringstream out;
  out << (spectrum.unit == fitkit::Spectrum::Unit::Gigahertz
              ? kSpectrumGhzHeader
              : kSpectrumNmHeader)
      << "\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    out << format_number(spectrum.x[i]) << "," << format_number(spectrum.y[i])
        << "\n";
  write_file(path, out.str());
}

collection::EfficiencyTable load_efficiency_table(const std::string& path) {
  Table t = read_csv(path, kTableHeader);
  require_increasing(t.columns[0], path, "wavelength_nm");
  try {
    return collection::EfficiencyTable(
        std::move(t.columns[0]), std::move(t.columns[1]),
        std::move(t.columns[2]), std::move(t.columns[3]));
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

void save_efficiency_table(const collection::EfficiencyTable& table,
                           const std::string& path) {
  table.validate();
  std::ostringstream out;
  out << kTableHeader << "\n";
  for (std::size_t i = 0; i < table.size(); ++i)
    out << format_number(table.wavelength_nm[i]) << ","
        << format_number(table.eps_x[i]) << "," << format_number(table.eps_y[i])
        << "," << format_number(table.eps_z[i]) << "\n";
  write_file(path, out.str());
}

fitkit::SaturationData load_saturation(const std::string& path) {
  Table t = read_csv(path, kSaturationHeader);
  require_increasing(t.columns[0], path, "power_mw");
  fitkit::SaturationData data{std::move(t.columns[0]), std::move(t.columns[1])};
  data.validate();
  return data;
}

void save_saturation(const fitkit::SaturationData& data,
                     const std::string& path) {
  data.validate();
  std::ostringstream out;
  out << kSaturationHeader << "\n";
  for (std::size_t i = 0; i < data.power_mw.size(); ++i)
    out << format_number(data.power_mw[i]) << ","
        << format_number(data.rate_khz[i]) << "\n";
  write_file(path, out.str());
}

}  // namespace nvcavity::csvio
