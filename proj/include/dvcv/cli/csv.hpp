#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dvcv::cli {

/// Nine significant digits, '.' decimal separator, no locale influence.
std::string format_number(double x);

/// Comment block (each line written with a leading "# "), a header row and
/// comma-separated data rows terminated by '\n'.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_comment(std::string line) { comments_.push_back(std::move(line)); }
  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t column_index(const std::string& name) const;
  /// Parsed numeric value of a cell.
  double value(std::size_t row, const std::string& column) const;

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace dvcv::cli
