#pragma once

#include <stdexcept>
#include <string>

namespace levylab {

/// Numeric integration failed to reach the requested tolerance.
struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

/// Two paths that must share a refined grid do not.
struct GridMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A coefficient matrix was too ill-conditioned to invert reliably.
struct ConditionError : std::runtime_error {
  ConditionError(const std::string& what, double time)
      : std::runtime_error(what), at_time(time) {}
  double at_time;
};

/// The requested (triplet, scaling family) pair has no decision rule.
struct UnsupportedPredictionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration; carries the offending field and, when parsed
/// from a file, the 1-based line it came from (0 if unknown).
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& what, std::string field_name, int line_no = 0)
      : std::runtime_error(what), field(std::move(field_name)), line(line_no) {}
  std::string field;
  int line;
};

}  // namespace levylab
