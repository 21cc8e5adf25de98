#include "lplab/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "lplab/cli.hpp"

namespace lplab {

void Table::add(std::vector<Cell> row) {
  row.resize(columns.size(), Missing{});
  rows.push_back(std::move(row));
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string q = "\"";
  for (char c : field) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

namespace {

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(Missing) const { return ""; }
    std::string operator()(double x) const { return format_real(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } visitor;
  return std::visit(visitor, c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(Missing) const { return nullptr; }
    nlohmann::ordered_json operator()(double x) const {
      if (std::isfinite(x)) return x;
      return format_real(x);
    }
    nlohmann::ordered_json operator()(std::int64_t x) const { return x; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
  } visitor;
  return std::visit(visitor, c);
}

}  // namespace

void write_csv(std::ostream& out, const RunConfig& config, const Table& table) {
  out << "# lplab " << version() << '\n';
  out << "# schema_version=" << kSchemaVersion << '\n';
  out << "# command=" << config.command << '\n';
  out << "# seed=" << config.seed << '\n';
  out << "# samples=" << config.samples << '\n';
  out << "# streams=" << config.streams << '\n';
  out << "# output_format=" << config.output_format << '\n';
  out << "# output_path=" << config.output_path << '\n';
  for (const auto& [key, value] : config.constants) out << "# constants." << key << '=' << format_real(value) << '\n';
  for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << csv_quote(table.columns[j]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_quote(cell_text(row[j]));
    out << '\n';
  }
}

void write_json(std::ostream& out, const RunConfig& config, const Table& table) {
  nlohmann::ordered_json doc;
  auto& cfg = doc["config"];
  cfg["version"] = version();
  cfg["command"] = config.command;
  cfg["seed"] = config.seed;
  cfg["samples"] = config.samples;
  cfg["streams"] = config.streams;
  cfg["output_format"] = config.output_format;
  cfg["output_path"] = config.output_path;
  cfg["constants"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config.constants) cfg["constants"][key] = value;
  doc["schema_version"] = kSchemaVersion;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) r[table.columns[j]] = cell_json(row[j]);
    doc["rows"].push_back(std::move(r));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace lplab
