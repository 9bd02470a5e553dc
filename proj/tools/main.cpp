// main.cpp — topamp command-line tool
//
// Verbs:
//   run <config>       execute the configured experiment and write CSV tables
//   validate <config>  check a config and report every violation
//   schema             print the JSON schema for configs
//   version            print the tool version
//
// Exit codes: 0 success, 1 config error, 2 runtime error, 3 partial results.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "topamp/config.hpp"
#include "topamp/experiment.hpp"
#include "topamp/table.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;
constexpr int kExitPartial = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driven-dissipative lattice amplifier simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = std::thread::hardware_concurrency();
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool strict = false;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--threads", threads, "worker threads (default: all cores)");
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--seed", seed, "seed override for disorder runs")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_flag("--strict", strict, "fail on any grid-point error");

  CLI::App* validate = app.add_subcommand("validate", "validate an experiment config");
  validate->add_option("config", config_path, "JSON config file")->required();

  CLI::App* schema = app.add_subcommand("schema", "print the config JSON schema");
  CLI::App* version = app.add_subcommand("version", "print the tool version");

  CLI11_PARSE(app, argc, argv);

  if (schema->parsed()) {
    std::cout << topamp::cli::config_schema() << "\n";
    return kExitOk;
  }
  if (version->parsed()) {
    std::cout << "topamp " << topamp::cli::kVersion << "\n";
    return kExitOk;
  }

  topamp::cli::ExperimentConfig config;
  try {
    config = topamp::cli::parse_config(read_file(config_path));
  } catch (const topamp::cli::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  if (validate->parsed()) {
    std::cout << "config ok (" << config.kind << ", hash "
              << topamp::cli::config_hash(config) << ")\n";
    return kExitOk;
  }

  if (seed_set) {
    config.seed = seed;
    config.canonical["seed"] = seed;
  }
  if (!out_dir.empty()) config.output.dir = out_dir;

  topamp::cli::RunOptions opts;
  opts.threads = threads > 0 ? static_cast<int>(threads) : 1;
  opts.strict = strict;

  try {
    const auto outcome = topamp::cli::run_experiment(config, opts);
    const auto emitted = topamp::cli::emit(outcome.tables, config.output.dir, config.kind,
                                           topamp::cli::config_hash(config));
    for (const auto& f : emitted.files) std::cout << f.string() << "\n";
    if (outcome.partial) {
      std::cerr << "warning: " << outcome.errors.size()
                << " grid point(s) failed; results are partial\n";
      for (const auto& e : outcome.errors) std::cerr << "  " << e << "\n";
      return kExitPartial;
    }
    if (!outcome.tables.empty() &&
        std::all_of(outcome.tables.begin(), outcome.tables.end(),
                    [](const topamp::cli::ResultTable& t) { return t.rows.empty(); }))
      std::cerr << "warning: experiment produced empty tables\n";
    return kExitOk;
  } catch (const topamp::cli::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}
