#pragma once

#include <string>
#include <variant>
#include <vector>

namespace chiral {

/// Shortest decimal text that parses back to the same double; "" for NaN,
/// "inf" / "-inf" for infinities.
std::string format_number(double v);

using CsvCell = std::variant<double, long long, std::string>;

struct CsvTable {
  std::vector<std::string> comments;  ///< emitted as "# ..." lines before the header
  std::vector<std::string> columns;
  std::vector<std::vector<CsvCell>> rows;

  void add_row(std::vector<CsvCell> row);
  std::string render() const;
};

}  // namespace chiral
