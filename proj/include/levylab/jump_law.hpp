#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "levylab/rng.hpp"

namespace levylab {

/// Which part of the real line a tail or moment integral runs over.
enum class Side { Plus, Minus, Both };

/// Jump size distribution for finite-activity measures: point mass,
/// uniform on an interval (scalar), or a finite mixture of vector atoms.
/// Tails and absolute moments are analytic; they are defined for scalar
/// laws (dim == 1) and for atom mixtures through the norm where noted.
class JumpLaw {
public:
  static JumpLaw point_mass(const Eigen::VectorXd& c);
  static JumpLaw uniform(double a, double b);
  static JumpLaw discrete(std::vector<Eigen::VectorXd> atoms,
                          std::vector<double> probabilities);

  int dim() const { return dim_; }
  Eigen::VectorXd sample(RngStream& rng) const;

  /// P(J > x) for x > 0 (scalar laws).
  double tail_plus(double x) const;
  /// P(J < -x) for x > 0 (scalar laws).
  double tail_minus(double x) const;

  /// E[ ||J||^r 1_{||J|| <= 1} ], r > 0.  The one-sided variants restrict
  /// to J in (0, 1] respectively [-1, 0) and are scalar only.
  double abs_moment_within_unit(double r, Side side = Side::Both) const;
  /// E[ J 1_{||J|| <= 1} ].
  Eigen::VectorXd mean_within_unit_ball() const;
  /// E[ ||J||^2 1_{||J|| < eps} ].
  double second_moment_below(double eps) const;
  /// E[ J 1_{||J|| < eps} ].
  Eigen::VectorXd mean_below(double eps) const;
  /// P(||J|| >= eps).
  double prob_norm_at_least(double eps) const;
  /// Draws J conditioned on ||J|| >= eps by rejection.
  Eigen::VectorXd sample_conditional_norm_at_least(double eps,
                                                   RngStream& rng) const;

  /// E[ exp(i z . J) ].
  std::complex<double> fourier(const Eigen::VectorXd& z) const;

private:
  enum class Kind { PointMass, Uniform, Discrete };
  JumpLaw() = default;
  void require_scalar(const char* op) const;

  Kind kind_ = Kind::PointMass;
  int dim_ = 1;
  Eigen::VectorXd atom_;                  // point mass
  double lo_ = 0.0, hi_ = 0.0;            // uniform
  std::vector<Eigen::VectorXd> atoms_;    // discrete
  std::vector<double> probs_;
  std::vector<double> cum_;
};

}  // namespace levylab
