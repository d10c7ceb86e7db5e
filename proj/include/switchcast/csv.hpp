#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace switchcast {

// Minimal CSV layer: header row, comma separated, no quoting (the inputs
// are plain numeric tables). Doubles are emitted in shortest round-trip
// form so written files reload bit-for-bit.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);

std::string format_double(double v);

// Parses a cell; the configured missing marker and the empty string map
// to NaN. Throws parse_error naming row/column otherwise.
double parse_cell(const std::string& cell, const std::string& missing_marker,
                  std::size_t row, const std::string& column);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace switchcast
