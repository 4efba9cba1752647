#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mcf {

/// 17 significant digits, round-trippable.
std::string format_double(double x);

/// Shortest representation that parses back to t exactly; used in snapshot file names.
std::string format_time(double t);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const std::vector<double>& column(const std::string& name) const;
};

/// Header row, then one line per row. All columns must have equal length.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Reads a file written by write_csv. Throws ConfigError on malformed content.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace mcf
