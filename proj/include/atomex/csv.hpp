#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace atomex {

// Fixed 17-significant-digit decimal form (round-trips every double).
std::string format_float(double x);

// Deterministic CSV assembly: UTF-8, LF line endings, 17-significant-digit
// floats, no trailing whitespace.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);
  // Pre-formatted cells (e.g. a leading label column).
  void row_raw(const std::vector<std::string>& cells);

  const std::string& str() const { return buffer_; }

 private:
  std::string buffer_;
  size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Parses numeric CSV produced by CsvWriter (or equivalent). Throws
// std::invalid_argument on malformed input.
CsvTable parse_csv(const std::string& text);

}  // namespace atomex
