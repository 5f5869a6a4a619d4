// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace crdra::tools {

using Cell = std::variant<std::string, double, std::int64_t>;

/// 12 significant digits, '.' separator, independent of the locale.
std::string format_number(double value);

/// Comment lines (prefixed with '#'), a header row and data rows.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string render() const;
  /// Index of `name` in `columns`; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
};

}  // namespace crdra::tools
