// SPDX-License-Identifier: Apache-2.0
#include "fmux/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fmux {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table row width does not match the header");
  }
  rows.push_back(std::move(row));
}

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

}  // namespace

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    os << (i ? "," : "") << columns[i];
  }
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << cell_text(row[i]);
    }
    os << "\n";
  }
}

void Table::write_json(std::ostream& os) const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* iv = std::get_if<std::int64_t>(&row[i])) {
        obj[columns[i]] = *iv;
      } else if (const auto* dv = std::get_if<double>(&row[i])) {
        obj[columns[i]] = *dv;
      } else {
        obj[columns[i]] = std::get<std::string>(row[i]);
      }
    }
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << "\n";
}

std::string Table::to_string(bool json) const {
  std::ostringstream os;
  json ? write_json(os) : write_csv(os);
  return os.str();
}

}  // namespace fmux
