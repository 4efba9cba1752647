#include "mcf/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mcf/errors.hpp"

namespace mcf {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_time(double t) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, t);
  return std::string(buf, res.ptr);
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError("csv: no column '" + name + "'");
  return columns[static_cast<std::size_t>(it - header.begin())];
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (table.header.size() != table.columns.size()) {
    throw std::invalid_argument("write_csv: header/column count mismatch");
  }
  const std::size_t n = table.rows();
  for (const auto& c : table.columns) {
    if (c.size() != n) throw std::invalid_argument("write_csv: ragged columns");
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      out << (j ? "," : "") << format_double(table.columns[j][i]);
    }
    out << '\n';
  }
  if (!out) throw ConfigError("write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  table.columns.resize(table.header.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= table.columns.size()) break;
      double x = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad number '" +
                          cell + "'");
      }
      table.columns[j++].push_back(x);
    }
    if (j != table.columns.size()) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(table.columns.size()) + " fields");
    }
  }
  return table;
}

}  // namespace mcf
