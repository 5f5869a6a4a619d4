// SPDX-License-Identifier: Apache-2.0
#include "crdra/tools/csv.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace crdra::tools {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace {

struct CellText {
  std::string operator()(const std::string& s) const { return s; }
  std::string operator()(double v) const { return format_number(v); }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
};

}  // namespace

std::string CsvTable::render() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + std::visit(CellText{}, row[i]);
    out += "\n";
  }
  return out;
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

}  // namespace crdra::tools
