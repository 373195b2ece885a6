#include "qbat/csv.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbat/errors.hpp"

namespace qbat {

std::string format_sig12(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

void write_csv_file(const std::string& path, const CsvDocument& doc) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream out(path, std::ios::binary);  // binary: byte-stable output
  if (!out) throw NumericError("cannot open output file: " + path);
  for (const auto& m : doc.meta) out << "# " << m << "\n";
  for (std::size_t i = 0; i < doc.columns.size(); ++i) {
    if (i) out << ",";
    out << doc.columns[i];
  }
  out << "\n";
  for (const auto& row : doc.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << row[i];
    }
    out << "\n";
  }
}

CsvDocument read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NumericError("cannot open csv file: " + path);
  CsvDocument doc;
  std::string line;
  bool have_header = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string token;
    std::stringstream ss(s);
    while (std::getline(ss, token, ',')) out.push_back(token);
    return out;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::size_t start = 1;
      if (start < line.size() && line[start] == ' ') ++start;
      doc.meta.push_back(line.substr(start));
      continue;
    }
    if (!have_header) {
      doc.columns = split(line);
      have_header = true;
    } else {
      doc.rows.push_back(split(line));
    }
  }
  return doc;
}

}  // namespace qbat
