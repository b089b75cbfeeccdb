#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace edos::csv {

// One parsed record. Quoted fields may span lines; doubled quotes unescape.
using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;

  // Index of a header column, or -1.
  int column(std::string_view name) const;
};

Table parse(std::string_view content);
Table read_file(const std::string& path);

// Serializes with minimal quoting (fields containing , " \r \n get quoted).
std::string to_string(const Table& table);
void write_file(const std::string& path, const Table& table);

}  // namespace edos::csv
