#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lwcoex/core.hpp"

namespace lwcoex {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Six significant digits, plain decimal point, no locale surprises.
inline std::string csv_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_cell(std::int64_t v) { return std::to_string(v); }
inline std::string csv_cell(int v) { return std::to_string(v); }

inline std::string to_string(const Csv& csv) {
  std::ostringstream o;
  for (std::size_t i = 0; i < csv.header.size(); ++i) {
    if (i) o << ',';
    o << csv.header[i];
  }
  o << '\n';
  for (const auto& row : csv.rows) {
    if (row.size() != csv.header.size())
      throw SimError("csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) o << ',';
      o << row[i];
    }
    o << '\n';
  }
  return o.str();
}

// Binary mode keeps the LF endings exactly as produced.
inline void write_csv(const Csv& csv, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SimError("csv: cannot open for writing: " + path);
  out << to_string(csv);
  if (!out) throw SimError("csv: write failed: " + path);
}

// Minimalist reader for round-trips and derived outputs; the writer never
// emits quoting or embedded commas.
inline Csv parse_csv(const std::string& text) {
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  bool first = true;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && ss.eof()) break;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.empty() || line.back() == ',') cells.push_back("");
    if (first) {
      csv.header = std::move(cells);
      first = false;
    } else {
      csv.rows.push_back(std::move(cells));
    }
  }
  return csv;
}

inline Csv read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError("csv: cannot open for reading: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace lwcoex
