#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "levylab/scaling.hpp"
#include "levylab/triplet.hpp"

namespace levylab {

enum class ShortTimeBehavior {
  ZeroLimit,       // X_t / f(t) -> 0 almost surely
  FiniteLimit,     // X_t / f(t) -> a finite nonzero constant
  DivergesInNorm,  // ||X_t|| / f(t) -> infinity in probability
  OscillatesLIL,   // bounded nonzero limsup of the iterated-logarithm type
};

const char* to_string(ShortTimeBehavior b);

struct ShortTimePrediction {
  ShortTimeBehavior behavior = ShortTimeBehavior::ZeroLimit;
  /// Limit vector, present only for FiniteLimit.
  std::optional<Eigen::VectorXd> limit;
  /// Human-readable account of which branch of the decision rule fired.
  std::string justification;
};

/// Predicts the almost-sure small-time behaviour of X_t / f(t) from the
/// triplet and the regular-variation index of f.  Throws
/// UnsupportedPredictionError when no decision rule applies (custom
/// scaling functions without an index, or the critical index 1/2 with a
/// jump part too heavy for the moment probe).
ShortTimePrediction predict_short_time(const CharacteristicTriplet& triplet,
                                       const ScalingFunction& scaling);

}  // namespace levylab
