#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kscars {

inline constexpr int kSchemaVersion = 1;
std::string_view generated_by() noexcept;

/// Column-oriented numeric table with a single header row.
class CsvTable {
 public:
  void add_column(std::string name, std::vector<double> values);

  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
  bool has(std::string_view name) const noexcept;
  /// Throws Configuration when the column is missing.
  const std::vector<double>& column(std::string_view name) const;

  /// 17 significant digits, '.' decimal separator, '\n' line ends.
  std::string to_string() const;
  static CsvTable parse(std::string_view text);

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

/// %.17g, with 0/nan/inf spelled out.
std::string format_double(double v);

/// Writes via a sibling temporary file and rename. Creates parent directories.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace kscars
