#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sklevy::cli {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};

/// Column names "<name>_1".."<name>_d".
std::vector<std::string> component_columns(const std::string& name, std::size_t dim);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace sklevy::cli
