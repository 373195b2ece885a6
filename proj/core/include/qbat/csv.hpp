#pragma once

#include <string>
#include <vector>

namespace qbat {

// 12 significant digits, the CSV contract for floating-point fields.
std::string format_sig12(double v);

struct CsvDocument {
  std::vector<std::string> meta;     // emitted as "# ..." lines
  std::vector<std::string> columns;  // schema row
  std::vector<std::vector<std::string>> rows;
};

void write_csv_file(const std::string& path, const CsvDocument& doc);

// Reads the schema row and data; meta lines are kept verbatim (without the
// leading "# ").
CsvDocument read_csv_file(const std::string& path);

}  // namespace qbat
