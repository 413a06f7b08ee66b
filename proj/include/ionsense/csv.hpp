// csv.hpp — deterministic plain-text table output: fixed 12-significant-digit
// formatting, no timestamps, header row always present.

#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ionsense {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header)
      : columns_(std::move(header)) {}

  void add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) {
      throw std::invalid_argument("CsvWriter: row width mismatch");
    }
    rows_.push_back(cells);
  }

  void add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row(cells);
  }

  std::string to_string() const {
    std::string out;
    for (size_t i = 0; i < columns_.size(); ++i) {
      out += columns_[i];
      out += (i + 1 < columns_.size()) ? "," : "\n";
    }
    for (const auto& row : rows_) {
      for (size_t i = 0; i < row.size(); ++i) {
        out += row[i];
        out += (i + 1 < row.size()) ? "," : "\n";
      }
    }
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("CsvWriter: cannot open " + path);
    f << to_string();
    if (!f) throw std::runtime_error("CsvWriter: write failed for " + path);
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

CsvTable read_csv(const std::string& path);

}  // namespace ionsense
