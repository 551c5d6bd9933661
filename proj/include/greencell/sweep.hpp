#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "greencell/config.hpp"

// Tabular results and their CSV rendering.  Output is deterministic down to
// the byte: fixed column order, fixed float formatting, '\n' line endings.

namespace greencell {

struct SweepResult {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline std::string render_csv(const SweepResult& result) {
  std::string out;
  for (const auto& [key, value] : result.metadata) {
    out += "# " + key + "=" + value + "\n";
  }
  for (std::size_t i = 0; i < result.columns.size(); ++i) {
    if (i > 0) {
      out += ",";
    }
    out += result.columns[i];
  }
  out += "\n";
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) {
        out += ",";
      }
      out += detail::fmt_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing '" + path + "'");
  }
}

}  // namespace greencell
