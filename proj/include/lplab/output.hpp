#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace lplab {

/// Empty cell (CSV: empty field, JSON: null).
struct Missing {
  friend bool operator==(Missing, Missing) = default;
};

using Cell = std::variant<Missing, double, std::int64_t, std::string, bool>;

/// Everything needed to reproduce a run; echoed at the top of every output.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::int64_t samples = 100000;
  int streams = 16;
  std::map<std::string, double> constants;
  std::string output_format = "csv";
  std::string output_path = "-";
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

inline constexpr int kSchemaVersion = 1;

/// `#` header lines, a column row, then RFC-4180 data rows. Reals use 17
/// significant digits; non-finite values print as inf, -inf, nan.
void write_csv(std::ostream& out, const RunConfig& config, const Table& table);
/// {config, schema_version, rows: [{column: value}]}; non-finite reals become
/// the strings "inf", "-inf", "nan".
void write_json(std::ostream& out, const RunConfig& config, const Table& table);

std::string format_real(double x);
std::string csv_quote(const std::string& field);

}  // namespace lplab
