#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "quasiherm/error.hpp"

namespace quasiherm {

/// Round-trip decimal with 17 significant digits, locale independent.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes to a sibling temporary file and renames it over `path`.
inline void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::invalid_parameter, "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) fail(ErrorCode::invalid_parameter, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::invalid_parameter, "cannot move output into " + path.string());
  }
}

/// Comma-separated table with optional leading `# key=value` comment lines.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::string str() const {
    for (const auto& c : columns)
      if (c.size() != columns.front().size()) fail(ErrorCode::invalid_parameter, "CSV columns differ in length");
    if (columns.size() != header.size()) fail(ErrorCode::invalid_parameter, "CSV header does not match columns");
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
    out += "\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < columns.size(); ++j) out += (j ? "," : "") + format_double(columns[j][i]);
      out += "\n";
    }
    return out;
  }
};

}  // namespace quasiherm
