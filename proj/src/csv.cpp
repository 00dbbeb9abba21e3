// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#include "ocpsens/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace ocpsens {

void CsvTable::add_column(std::string name, Eigen::VectorXd values) {
  if (!data.empty() && values.size() != rows()) {
    throw std::invalid_argument("csv column '" + name +
                                "' has mismatched length");
  }
  columns.push_back(std::move(name));
  data.push_back(std::move(values));
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void emit_csv(const CsvTable& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  const Eigen::Index n = table.rows();
  for (Eigen::Index r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < table.data.size(); ++c) {
      if (c > 0) out << ',';
      out << format_double(table.data[c][r]);
    }
    out << '\n';
  }
}

void emit_json(const CsvTable& table, std::ostream& out) {
  out << "{\"columns\":[";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << '"' << table.columns[c] << '"';
  }
  out << "],\"rows\":[";
  const Eigen::Index n = table.rows();
  for (Eigen::Index r = 0; r < n; ++r) {
    if (r > 0) out << ',';
    out << '[';
    for (std::size_t c = 0; c < table.data.size(); ++c) {
      if (c > 0) out << ',';
      out << format_double(table.data[c][r]);
    }
    out << ']';
  }
  out << "]}\n";
}

}  // namespace ocpsens
