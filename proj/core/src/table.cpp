#include "parablock/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "parablock/errors.hpp"

#ifndef PARABLOCK_GIT_DESCRIBE
#define PARABLOCK_GIT_DESCRIBE "unknown"
#endif

namespace parablock::experiment {

std::size_t Table::index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  throw InvalidArgument("no column named " + name);
}

std::vector<Cell> Table::column(const std::string& name) const {
  const std::size_t k = index(name);
  std::vector<Cell> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw InvalidArgument("row width does not match the columns");
  rows.push_back(std::move(row));
}

const char* version() { return PARABLOCK_GIT_DESCRIBE; }

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

std::string to_csv(const Table& t, const std::string& experiment, const std::string& config_echo) {
  std::ostringstream out;
  out << "# parablock " << version() << '\n';
  out << "# experiment: " << experiment << '\n';
  out << "# config:\n";
  std::istringstream cfg(config_echo);
  for (std::string line; std::getline(cfg, line);) out << "#   " << line << '\n';
  for (const std::string& n : t.notes) out << "# " << n << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i].name;
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (!row[i] || std::isnan(*row[i])) continue;
      if (t.columns[i].integral)
        out << static_cast<long long>(std::llround(*row[i]));
      else
        out << format_number(*row[i]);
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const std::filesystem::path& path, const Table& t, const std::string& experiment,
               const std::string& config_echo) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << to_csv(t, experiment, config_echo);
  if (!f) throw ConfigError("failed writing " + path.string());
}

}  // namespace parablock::experiment
