// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace fmux {

/// Shortest decimal representation that parses back to exactly the same
/// double (std::to_chars). Deterministic and locale-independent.
std::string format_double(double value);

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-ordered result table with deterministic CSV / JSON emission.
/// CSV: one header row, one line per data row, '\n' terminated throughout.
/// JSON: array of flat objects keyed by column name.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;
  std::string to_string(bool json) const;
};

}  // namespace fmux
