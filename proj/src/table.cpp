// table.cpp — CSV formatting (RFC 4180, '.' decimals, 17 significant digits)

#include "topamp/table.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace topamp::cli {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
  return out;
}

}  // namespace

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("ResultTable: row width does not match columns");
  rows.push_back(std::move(row));
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    std::string header = table.columns[c];
    if (c < table.units.size() && !table.units[c].empty())
      header += " [" + table.units[c] + "]";
    out << csv_field(header);
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_double(row[c]);
    }
    out << "\r\n";
  }
  return out.str();
}

EmittedFiles emit(const std::vector<ResultTable>& tables, const std::filesystem::path& dir,
                  const std::string& experiment, const std::string& config_hash) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("emit: cannot create directory " + dir.string() + ": " +
                                   ec.message());

  EmittedFiles emitted;
  for (const auto& table : tables) {
    std::string stem = sanitize(experiment) + "__" + config_hash;
    if (tables.size() > 1 || (!table.name.empty() && table.name != experiment))
      stem += "__" + sanitize(table.name);

    const auto csv_path = dir / (stem + ".csv");
    {
      std::ofstream out(csv_path, std::ios::binary);
      if (!out) throw std::runtime_error("emit: cannot open " + csv_path.string());
      out << to_csv(table);
      if (!out) throw std::runtime_error("emit: write failed for " + csv_path.string());
    }
    emitted.files.push_back(csv_path);

    nlohmann::json sidecar = table.metadata;
    sidecar["table"] = table.name;
    sidecar["columns"] = table.columns;
    sidecar["units"] = table.units;
    sidecar["rows"] = table.rows.size();
    const auto json_path = dir / (stem + ".json");
    {
      std::ofstream out(json_path, std::ios::binary);
      if (!out) throw std::runtime_error("emit: cannot open " + json_path.string());
      out << sidecar.dump(2) << "\n";
      if (!out) throw std::runtime_error("emit: write failed for " + json_path.string());
    }
    emitted.files.push_back(json_path);
  }
  return emitted;
}

}  // namespace topamp::cli
