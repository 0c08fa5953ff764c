#include "subharmonic/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "subharmonic/errors.hpp"

namespace subharmonic {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::string& schema, const std::vector<std::string>& columns)
    : out_(path, std::ios::out | std::ios::trunc), path_(path), columns_(columns.size()) {
  if (!out_) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out_ << "# schema=" << schema << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<CsvField>& fields) {
  if (fields.size() != columns_) fail(ErrorCode::Internal, "CSV row width mismatch in '" + path_ + "'");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    if (const auto* d = std::get_if<double>(&fields[i]))
      out_ << format_number(*d);
    else if (const auto* n = std::get_if<long long>(&fields[i]))
      out_ << *n;
    else
      out_ << std::get<std::string>(fields[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) fail(ErrorCode::IoError, "write to '" + path_ + "' failed");
  out_.close();
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# schema=", 0) == 0) {
      t.schema = line.substr(9);
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (t.columns.empty()) {
      t.columns = split(line);
      continue;
    }
    t.rows.push_back(split(line));
  }
  return t;
}

}  // namespace subharmonic
