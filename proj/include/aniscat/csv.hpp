// Plain CSV tables with a leading block of '#' comment lines.
#pragma once

#include <string>
#include <vector>

namespace aniscat {

struct CsvTable {
  std::vector<std::string> comments;  // written as "# <line>"
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Shortest round-trip text for precision 17, "%.<precision>g" otherwise;
// "nan" and "inf"/"-inf" for non-finite values.
std::string format_number(double value, int precision);

std::string render_csv(const CsvTable& table);

// Writes atomically enough for batch use: the file is replaced as a whole.
void write_csv(const std::string& path, const CsvTable& table);

// Inverse of render_csv; fields must not contain commas or quotes.
CsvTable parse_csv(const std::string& text);

}  // namespace aniscat
