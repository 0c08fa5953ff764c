#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace subharmonic {

using CsvField = std::variant<double, long long, std::string>;

/// "%.17g" for doubles so that output round-trips and is byte-stable.
std::string format_number(double v);

/// Writes "# schema=<schema>", a header line, then rows.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema, const std::vector<std::string>& columns);
  void row(const std::vector<CsvField>& fields);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

struct CsvTable {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a file written by CsvWriter; IoError if it cannot be opened.
CsvTable read_csv(const std::string& path);

}  // namespace subharmonic
