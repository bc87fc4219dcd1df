#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "levylab/errors.hpp"
#include "levylab/runner.hpp"

namespace {

constexpr const char* kVersion = "levylab 1.0.0";

int run_command(const std::string& config_path, int workers) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "config error: cannot open " << config_path << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    levylab::ExperimentConfig config =
        levylab::parse_experiment_config(buffer.str());
    config.workers = workers;
    return levylab::run_experiment(config, std::cerr);
  } catch (const levylab::ConfigError& e) {
    std::cerr << "config error in field '" << e.field << "'";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Monte Carlo laboratory for the short-time behaviour of processes "
      "with independent stationary increments and the equations they drive"};
  app.require_subcommand(1);

  std::string config_path;
  int workers = 1;
  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "JSON experiment config file")
      ->required();
  run->add_option("--workers", workers,
                  "worker threads; outputs are identical for any value")
      ->check(CLI::PositiveNumber);

  CLI::App* list = app.add_subcommand(
      "list", "list built-in drivers, coefficients, scalings and verifiers");
  CLI::App* version = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  if (run->parsed()) return run_command(config_path, workers);
  if (list->parsed()) {
    std::cout << levylab::list_catalog();
    return 0;
  }
  if (version->parsed()) {
    std::cout << kVersion << "\n";
    return 0;
  }
  return 2;
}
