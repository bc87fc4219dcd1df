#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "levylab/measure.hpp"

namespace levylab {

/// Generating triplet (A, nu, gamma) of a Levy process, with jumps of norm
/// at most one compensated.  `gaussian` is the covariance of the Brownian
/// part, `jumps` the jump intensity measure (absent for continuous
/// processes) and `location` the drift-like parameter under this
/// truncation convention.
struct CharacteristicTriplet {
  int dim = 1;
  Eigen::MatrixXd gaussian;
  std::optional<LevyMeasure> jumps;
  Eigen::VectorXd location;

  /// Validates shapes and positive semidefiniteness of the Gaussian part.
  static CharacteristicTriplet make(Eigen::MatrixXd gaussian,
                                    std::optional<LevyMeasure> jumps,
                                    Eigen::VectorXd location);

  bool has_gaussian_part() const { return gaussian.norm() > 0.0; }
};

/// Pathwise regularity facts read off a triplet.
struct TripletSummary {
  bool bounded_variation = false;
  bool has_gaussian = false;
  bool finite_activity = false;
  /// Jump activity index: infimum of r with a finite r-th moment near 0.
  double activity_index = 0.0;
  /// Drift of the bounded-variation decomposition; present only when the
  /// paths have bounded variation.
  std::optional<Eigen::VectorXd> true_drift;
};

TripletSummary classify(const CharacteristicTriplet& triplet);

/// Levy-Khintchine exponent: log E[exp(i z . X_1)].
std::complex<double> characteristic_exponent(
    const CharacteristicTriplet& triplet, const Eigen::VectorXd& z);
std::complex<double> characteristic_exponent(
    const CharacteristicTriplet& triplet, double z);

}  // namespace levylab
