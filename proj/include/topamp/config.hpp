// config.hpp — strict JSON experiment configuration
//
// A config has exactly one model block, one experiment block, and an optional
// output block. Unknown keys are errors; validation reports every violation
// with its JSON path. `schema` (the CLI verb) prints the machine-readable
// JSON Schema for this format.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topamp/model.hpp"

namespace topamp::cli {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems);
  std::vector<std::string> problems_;
};

struct ModelBlock {
  bool is_chain = true;
  model::ChainParams chain;
  model::Boundary boundary = model::Boundary::open;
  model::LatticeSpec matrices;  // used when !is_chain
};

struct OutputBlock {
  std::string dir = "out";
  std::vector<std::string> formats{"csv"};
};

struct ExperimentConfig {
  ModelBlock model;
  std::string kind;             // experiment kind
  nlohmann::json experiment;    // full experiment block (kind-specific params)
  OutputBlock output;
  std::optional<std::uint64_t> seed;
  nlohmann::json canonical;     // normalized config used for hashing
};

ExperimentConfig parse_config(const std::string& text);

// FNV-1a over the canonical serialization, hex, 16 digits.
std::string config_hash(const ExperimentConfig& config);

std::string config_schema();

const std::vector<std::string>& experiment_kinds();

}  // namespace topamp::cli
