#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace parablock::experiment {

using Cell = std::optional<double>;

/// Column-named numeric table. Missing cells are written empty; flag columns
/// are written as integers, everything else as %.8e.
struct Table {
  struct Column {
    std::string name;
    bool integral = false;
  };

  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  ///< extra metadata lines

  std::size_t index(const std::string& name) const;
  std::vector<Cell> column(const std::string& name) const;
  void add_row(std::vector<Cell> row);
};

/// Version string baked in at build time.
const char* version();

std::string format_number(double v);

/// `#` header: tool version, experiment name, config echo, notes; then the
/// column header and rows, LF line endings.
std::string to_csv(const Table& t, const std::string& experiment, const std::string& config_echo);

void write_csv(const std::filesystem::path& path, const Table& t, const std::string& experiment,
               const std::string& config_echo);

}  // namespace parablock::experiment
