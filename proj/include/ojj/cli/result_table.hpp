#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace ojj::cli {

/// "%.12g"; non-finite values print as "nan", "inf", "-inf".
std::string format_number(double x);

/// Rounds to 12 significant digits for JSON output; non-finite becomes null.
nlohmann::json json_number(double x);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json provenance = nlohmann::json::object();

  void add_row(std::vector<double> row);  // DimensionError unless rectangular

  /// Stable sort on column `key` (ties keep insertion order).
  void sort_by(std::size_t key);

  std::vector<double> column(std::size_t index) const;

  /// Header plus rows, comma separated, LF endings. Provenance is not part of
  /// the CSV so repeated runs stay byte-identical.
  std::string to_csv() const;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ojj::cli
