// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ocpsens {

/// Column-major table of doubles with named headers, used by the CLI and by
/// tests to serialize sweep results.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<Eigen::VectorXd> data;  ///< one vector per column, equal sizes

  Eigen::Index rows() const { return data.empty() ? 0 : data.front().size(); }

  void add_column(std::string name, Eigen::VectorXd values);
};

/// Writes the table as RFC-4180-style CSV: header row, then one line per
/// record. Numbers are printed with "%.17g" so doubles round-trip exactly;
/// lines end with '\n' regardless of platform.
void emit_csv(const CsvTable& table, std::ostream& out);

/// Writes the same table as a JSON object {"columns": [...], "rows": [[...]]}
/// with the identical number formatting.
void emit_json(const CsvTable& table, std::ostream& out);

/// Formats one double with "%.17g" (shared by the CSV and JSON writers).
std::string format_double(double value);

}  // namespace ocpsens
