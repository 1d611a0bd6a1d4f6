#pragma once

// CSV emission: comma separated, one header row, LF line endings, numbers in
// scientific notation with 17 significant digits. Files are written to a
// temporary sibling and renamed into place.

#include "dopsolve/linalg.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dopsolve {

std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};

// Columns of `values` become CSV columns under `header`.
CsvTable matrix_table(const std::vector<std::string>& header, const Matrix& values);

void write_file_atomic(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace dopsolve
