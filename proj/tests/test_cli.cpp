// test_cli.cpp — config parsing, CSV round trips, experiment wiring

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "topamp/config.hpp"
#include "topamp/experiment.hpp"
#include "topamp/table.hpp"

using namespace topamp;
using namespace topamp::cli;

namespace {

std::string minimal_gain_sweep(const char* extra_experiment = "") {
  std::ostringstream cfg;
  cfg << R"({
    "model": {"chain": {"t_c": 1.0, "t_d": 1.0, "phi": 1.5707963267948966,
                         "gamma_p": 1.0, "omega0": 0.0, "n_sites": 6}},
    "experiment": {"kind": "gain-sweep")"
      << extra_experiment << R"(}
  })";
  return cfg.str();
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const auto config = parse_config(minimal_gain_sweep());
  CHECK(config.kind == "gain-sweep");
  CHECK(config.model.is_chain);
  CHECK(config.output.dir == "out");
  CHECK(!config.seed.has_value());
  CHECK(config_hash(config).size() == 16);
}

TEST_CASE("kappa rule violation is reported with its path") {
  const std::string bad = R"({
    "model": {"chain": {"t_c": 1.0, "t_d": 1.0, "phi": 0.0, "gamma_p": 4.0, "n_sites": 4}},
    "experiment": {"kind": "gain-sweep"}
  })";
  try {
    parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.problems().size() == 1);
    CHECK(e.problems().front().find("model.chain.gamma_p") != std::string::npos);
    CHECK(e.problems().front().find("kappa") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected, every violation reported") {
  const std::string bad = R"({
    "model": {"chain": {"t_c": 1.0, "t_d": 1.0, "phi": 0.0, "gamma_p": 5.0,
                         "n_sites": 4, "typo_key": 1}},
    "experiment": {"kind": "gain-sweep", "bogus": true}
  })";
  try {
    parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 3);
    bool typo = false, bogus = false, gamma = false;
    for (const auto& p : e.problems()) {
      typo |= p.find("model.chain.typo_key") != std::string::npos;
      bogus |= p.find("experiment.bogus") != std::string::npos;
      gamma |= p.find("model.chain.gamma_p") != std::string::npos;
    }
    CHECK(typo);
    CHECK(bogus);
    CHECK(gamma);
  }
}

TEST_CASE("phase-map config parses into grids") {
  const std::string cfg_text = R"({
    "model": {"chain": {"t_c": 1.0, "t_d": 1.0, "phi": 1.5707963267948966,
                         "gamma_p": 1.0, "n_sites": 12}},
    "experiment": {"kind": "phase-map", "omega_points": 6, "gamma_p_points": 5,
                    "omega_min": -2.0, "omega_max": 2.0}
  })";
  const auto config = parse_config(cfg_text);
  const auto outcome = run_experiment(config);
  REQUIRE(outcome.tables.size() == 1);
  CHECK(outcome.tables.front().rows.size() == 30);
  CHECK(!outcome.partial);
}

TEST_CASE("matrices model block round-trips through validation") {
  const std::string cfg_text = R"({
    "model": {"matrices": {
      "omega": [0.0, 0.1],
      "kappa": [1.0, 1.0],
      "coupling_g": {"re": [[0.0, 0.4], [0.4, 0.0]]},
      "pump": {"re": [[0.2, 0.0], [0.0, 0.2]]}
    }},
    "experiment": {"kind": "steady-state"}
  })";
  const auto config = parse_config(cfg_text);
  CHECK(!config.model.is_chain);
  const auto outcome = run_experiment(config);
  REQUIRE(outcome.tables.size() == 1);
  CHECK(outcome.tables.front().rows.size() == 2);
}

TEST_CASE("non-Hermitian matrices are rejected at parse time") {
  const std::string cfg_text = R"({
    "model": {"matrices": {
      "omega": [0.0, 0.0],
      "kappa": [1.0, 1.0],
      "coupling_g": {"re": [[0.0, 1.0], [2.0, 0.0]]}
    }},
    "experiment": {"kind": "steady-state"}
  })";
  CHECK_THROWS_AS(parse_config(cfg_text), ConfigError);
}

TEST_CASE("CSV emission round-trips floats exactly") {
  ResultTable table;
  table.name = "probe";
  table.columns = {"a", "b"};
  table.units = {"", "t_d"};
  table.add_row({1.0 / 3.0, 9216.0});
  table.add_row({std::nextafter(0.1, 1.0), -7.25e-31});

  const std::string csv = to_csv(table);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  for (const auto& row : table.rows) {
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string field;
    for (double expected : row) {
      std::getline(fields, field, ',');
      CHECK(std::stod(field) == expected);
    }
  }
}

TEST_CASE("empty tables emit a header-only CSV") {
  ResultTable table;
  table.name = "empty";
  table.columns = {"x"};
  table.units = {""};

  const auto dir = std::filesystem::temp_directory_path() / "topamp-test-empty";
  std::filesystem::remove_all(dir);
  const auto emitted = emit({table}, dir, "probe", "abc123");
  REQUIRE(emitted.files.size() == 2);
  std::ifstream csv(emitted.files.front());
  std::string content((std::istreambuf_iterator<char>(csv)), {});
  CHECK(content == "x\r\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("gain-sweep experiment agrees with its closed-form column") {
  const auto config = parse_config(minimal_gain_sweep(R"(, "omega_points": 21)"));
  const auto outcome = run_experiment(config);
  REQUIRE(outcome.tables.size() == 2);
  const auto& vs_n = outcome.tables[0];
  REQUIRE(vs_n.rows.size() == 1);
  CHECK(std::abs(vs_n.rows[0][3] - vs_n.rows[0][5]) < 0.3);  // dB columns
  CHECK(!outcome.partial);

  const auto& vs_w = outcome.tables[1];
  for (const auto& row : vs_w.rows)
    if (!std::isnan(row[4])) CHECK(std::abs(row[3] - row[5]) < 1.0);
}

TEST_CASE("stability experiment reports the gamma_p = 2 t_d threshold") {
  const std::string cfg_text = R"({
    "model": {"chain": {"t_c": 1.0, "t_d": 1.0, "phi": 1.5707963267948966,
                         "gamma_p": 1.0, "n_sites": 8}},
    "experiment": {"kind": "stability", "gamma_p_list": [1.0, 2.5], "boundary": "open"}
  })";
  const auto outcome = run_experiment(parse_config(cfg_text));
  const auto& rows = outcome.tables[0].rows;
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][2] == 1.0);  // stable at gamma_p = 1
  CHECK(rows[1][2] == 0.0);  // unstable at gamma_p = 2.5
  CHECK(rows[0][5] < 1e-10);
  CHECK(rows[1][5] < 1e-10);
}

TEST_CASE("classify experiment encodes the expected classes") {
  const std::string cfg_text = R"({
    "model": {"chain": {"t_c": 1.0, "t_d": 1.0, "phi": 1.5707963267948966,
                         "gamma_p": 1.0, "n_sites": 8}},
    "experiment": {"kind": "classify", "phi_list": [0.0, 1.5707963267948966],
                    "omega_list": [0.37]}
  })";
  const auto outcome = run_experiment(parse_config(cfg_text));
  const auto& rows = outcome.tables[0].rows;
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][2] == 2.0);  // phi = 0     -> CI
  CHECK(rows[1][2] == 0.0);  // phi = pi/2  -> AIII
}

TEST_CASE("disorder experiment is deterministic given a seed") {
  const std::string cfg_text = R"({
    "model": {"chain": {"t_c": 1.0, "t_d": 1.0, "phi": 1.5707963267948966,
                         "gamma_p": 0.5, "n_sites": 8}},
    "experiment": {"kind": "disorder", "w_list": [0.0, 1.0], "n_list": [8, 12, 16],
                    "instances": 6},
    "seed": 31415
  })";
  const auto config = parse_config(cfg_text);
  const auto a = run_experiment(config);
  const auto b = run_experiment(config);
  REQUIRE(a.tables.size() == 2);
  REQUIRE(a.tables[0].rows.size() == b.tables[0].rows.size());
  for (size_t r = 0; r < a.tables[0].rows.size(); ++r)
    for (size_t c = 0; c < a.tables[0].rows[r].size(); ++c)
      CHECK(a.tables[0].rows[r][c] == b.tables[0].rows[r][c]);
  CHECK(a.tables[0].metadata["seed"] == 31415);
}

TEST_CASE("nsr experiment carries the power-law fit") {
  const std::string cfg_text = R"({
    "model": {"chain": {"t_c": 1.0, "t_d": 1.0, "phi": 1.5707963267948966,
                         "gamma_p": 1.0, "n_sites": 12}},
    "experiment": {"kind": "nsr", "sites": [5, 7, 9, 11], "rel_tol": 1e-5}
  })";
  const auto outcome = run_experiment(parse_config(cfg_text));
  const auto& table = outcome.tables[0];
  REQUIRE(table.rows.size() == 4);
  const double power = table.metadata["fit_power"].get<double>();
  CHECK(power == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("chain-only experiments reject matrix models") {
  const std::string cfg_text = R"({
    "model": {"matrices": {"omega": [0.0], "kappa": [1.0]}},
    "experiment": {"kind": "disorder", "w_list": [0.0], "n_list": [4, 6, 8]}
  })";
  const auto config = parse_config(cfg_text);
  CHECK_THROWS_AS(run_experiment(config), ConfigError);
}

TEST_CASE("schema is valid JSON and lists every experiment kind") {
  const auto schema = nlohmann::json::parse(config_schema());
  const auto kinds = schema["properties"]["experiment"]["properties"]["kind"]["enum"];
  CHECK(kinds.size() == experiment_kinds().size());
}
