#include "dopsolve/csv.hpp"

#include "dopsolve/errors.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

namespace dopsolve {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw InvalidInputError("CSV row has " + std::to_string(row.size()) +
                            " fields, header has " +
                            std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

CsvTable matrix_table(const std::vector<std::string>& header, const Matrix& values) {
  if (static_cast<Index>(header.size()) != values.cols()) {
    throw InvalidInputError("CSV header does not match the column count");
  }
  CsvTable t{header, {}};
  t.rows.reserve(static_cast<std::size_t>(values.rows()));
  for (Index i = 0; i < values.rows(); ++i) {
    std::vector<std::string> row;
    row.reserve(header.size());
    for (Index j = 0; j < values.cols(); ++j) row.push_back(format_double(values(i, j)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " +
                ec.message());
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  write_file_atomic(path, table.str());
}

}  // namespace dopsolve
