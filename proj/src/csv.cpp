#include "atomex/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace atomex {

std::string format_float(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CsvWriter: empty header");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::vector<double>(values));
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) {
    throw std::invalid_argument("CsvWriter: row width does not match header");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_float(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::row_raw(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw std::invalid_argument("CsvWriter: row width does not match header");
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> cells;
    size_t cell_start = 0;
    while (true) {
      size_t comma = line.find(',', cell_start);
      cells.push_back(line.substr(cell_start, comma == std::string::npos ? std::string::npos
                                                                         : comma - cell_start));
      if (comma == std::string::npos) break;
      cell_start = comma + 1;
    }

    if (first) {
      table.header = std::move(cells);
      first = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) {
      char* end = nullptr;
      double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') {
        throw std::invalid_argument("parse_csv: malformed numeric cell \"" + c + "\"");
      }
      row.push_back(v);
    }
    if (!table.header.empty() && row.size() != table.header.size()) {
      throw std::invalid_argument("parse_csv: row width does not match header");
    }
    table.rows.push_back(std::move(row));
  }
  if (first) throw std::invalid_argument("parse_csv: empty input");
  return table;
}

}  // namespace atomex
