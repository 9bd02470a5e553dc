// table.hpp — rectangular result tables and CSV/JSON emission

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace topamp::cli {

// One rectangular numeric table plus metadata (config hash, tool version,
// seed, warnings). Floats are emitted with 17 significant digits so the CSV
// round-trips bit-exactly.
struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::string> units;  // one per column; empty string for none
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata;

  void add_row(std::vector<double> row);
};

std::string to_csv(const ResultTable& table);

struct EmittedFiles {
  std::vector<std::filesystem::path> files;
};

// Writes <experiment>__<hash>[__<table>].csv plus a .json metadata sidecar per
// table into `dir`. IO failures surface as std::runtime_error.
EmittedFiles emit(const std::vector<ResultTable>& tables, const std::filesystem::path& dir,
                  const std::string& experiment, const std::string& config_hash);

}  // namespace topamp::cli
