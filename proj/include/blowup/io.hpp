#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace blowup {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws ConfigError when absent.
  [[nodiscard]] std::size_t column(const std::string& name) const;
};

/// Shortest text that is still exact: 17 significant digits, '.' separator.
[[nodiscard]] std::string format_double(double x);

/// Writes header plus rows; throws Error when the file cannot be written or a row has the wrong width.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Reads a numeric CSV with one header row. Throws ConfigError with the line number on malformed input.
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

[[nodiscard]] std::string read_text(const std::filesystem::path& path);

/// BLOWUP_OUTPUT_ROOT / dir when the variable is set and dir is relative, otherwise dir.
[[nodiscard]] std::filesystem::path resolve_output(const std::string& dir);

}  // namespace blowup
