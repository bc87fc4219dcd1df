#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "levylab/ensemble.hpp"
#include "levylab/grid.hpp"
#include "levylab/scaling.hpp"
#include "levylab/sigma_map.hpp"
#include "levylab/triplet.hpp"

namespace levylab {

/// One verifier selection with its parameters.
struct VerifierSpec {
  std::string name;               // see list_catalog()
  std::string target = "driver";  // driver | solution
  double p = 1.0;                 // qv_decay rescaling exponent
  double band_lo = 0.7;           // limsup acceptance band
  double band_hi = 1.05;
};

/// A validated experiment: a driver ensemble, the coefficient of
/// dX = sigma(X_) dL, the rescaling and the verifiers to run against the
/// oracle prediction derived from the driver's triplet.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::size_t paths = 0;
  /// Worker count comes from the command line, never from the config file,
  /// so identical configs produce identical outputs at any parallelism.
  int workers = 1;
  std::filesystem::path output_dir;
  TimeGrid grid;
  std::string driver_kind;
  std::function<PathSkeleton(std::size_t)> make_driver;
  CharacteristicTriplet triplet;
  std::shared_ptr<const SigmaMap> sigma;
  Eigen::VectorXd initial_state;
  ScalingFunction scaling = ScalingFunction::power(1.0);
  std::vector<VerifierSpec> verifiers;
  bool dump_paths = false;
};

/// Parses and validates a JSON config.  Throws ConfigError naming the
/// offending field and the line it appears on.
ExperimentConfig parse_experiment_config(const std::string& text);

/// Runs the experiment: generates the ensembles, solves, evaluates every
/// selected verifier against its oracle and writes report.json,
/// verdicts.csv, one per-time CSV per verifier and optional path dumps
/// into the output directory (the LEVYLAB_OUTPUT_DIR environment variable
/// overrides the configured one).  Returns 0 when every verifier agrees
/// with its oracle, 1 otherwise; failing verifier names go to `log`.
int run_experiment(const ExperimentConfig& config, std::ostream& log);

/// Stable sorted listing of the built-in drivers, coefficients, scalings
/// and verifiers.
std::string list_catalog();

}  // namespace levylab
