#pragma once

// Small CSV and key=value config helpers shared by the CLI and tests.
// CSV dialect: '#'-prefixed comment lines first, then one header row, then
// data rows; no quoting (none of the emitted fields ever needs it).
// Numbers are written with shortest round-trip formatting.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccs/types.hpp"

namespace ccs {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::invalid_argument("parse_double: cannot parse '" + s + "'");
  return v;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

struct CsvTable {
  std::vector<std::string> comments;  // stored without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] int column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("CsvTable: no column named '" + name + "'");
  }

  [[nodiscard]] double number(size_t row, const std::string& name) const {
    return parse_double(rows.at(row).at(static_cast<size_t>(column(name))));
  }

  [[nodiscard]] const std::string& cell(size_t row, const std::string& name) const {
    return rows.at(row).at(static_cast<size_t>(column(name)));
  }
};

inline void write_csv(std::ostream& os, const CsvTable& table) {
  for (const auto& c : table.comments) os << "# " << c << "\n";
  for (size_t i = 0; i < table.header.size(); ++i)
    os << table.header[i] << (i + 1 < table.header.size() ? "," : "");
  os << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("write_csv: row width does not match header");
    for (size_t i = 0; i < row.size(); ++i) os << row[i] << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
}

inline CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string c = line.substr(1);
      if (!c.empty() && c.front() == ' ') c = c.substr(1);
      table.comments.push_back(c);
      continue;
    }
    auto cells = split(line, ',');
    for (auto& cell : cells) cell = trim(cell);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw std::invalid_argument("read_csv: no header row");
  return table;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("read_csv_file: cannot open '" + path + "'");
  return read_csv(is);
}

// key = value file, one pair per line, '#' starts a comment anywhere.
inline std::map<std::string, std::string> read_key_value(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

inline std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("read_key_value_file: cannot open '" + path + "'");
  return read_key_value(is);
}

// Numeric matrix in CSV form: '#' comment lines, then an optional single
// header row (detected by a cell that does not parse as a number), then
// uniform-width numeric rows.
inline Matrix read_numeric_matrix(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first_data_line = true;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line, ',');
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (auto& cell : cells) {
      try {
        row.push_back(parse_double(trim(cell)));
      } catch (const std::invalid_argument&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first_data_line) {
        first_data_line = false;  // header row, skip it
        continue;
      }
      throw std::invalid_argument("read_numeric_matrix: non-numeric cell in '" + line + "'");
    }
    first_data_line = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("read_numeric_matrix: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("read_numeric_matrix: no data rows");
  Matrix m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows.front().size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

inline Matrix read_numeric_matrix_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("read_numeric_matrix_file: cannot open '" + path + "'");
  return read_numeric_matrix(is);
}

}  // namespace ccs
