#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace levylab {

/// State-dependent coefficient sigma of dX = sigma(X_) dL.  A map takes
/// the flattened state (length state_dim) to the state_dim x driver_dim
/// matrix applied to driver increments.  Matrix states and drivers travel
/// column-major vectorized, as in PathSkeleton.
///
/// Every catalog entry carries an analytic Jacobian d vec(sigma) / d state;
/// custom maps may omit it and fall back to central differences.
class SigmaMap {
public:
  using MapFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
  using JacFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  /// sigma(x) == value for all x.
  static SigmaMap constant(Eigen::MatrixXd value);
  /// sigma(x) = diag(coefficients), square.
  static SigmaMap diagonal(Eigen::VectorXd coefficients);
  /// sigma(x) = intercept + sum_i x_i slopes[i].
  static SigmaMap affine(Eigen::MatrixXd intercept,
                         std::vector<Eigen::MatrixXd> slopes);
  /// Scalar map sigma(x) = a + b sin x + c cos x + d x.
  static SigmaMap scalar_sinusoid(double a, double b, double c, double d);
  /// Matrix state X (rows x cols), square driver (cols x cols), increment
  /// X dL; sigma(X) = I_cols (x) X.  This is the coefficient of the
  /// right-multiplicative equation solved by stochastic exponentials.
  static SigmaMap left_product(int rows, int cols);
  /// Matrix state X (rows x cols), square driver (rows x rows), increment
  /// dL X; sigma(X) = X^T (x) I_rows.
  static SigmaMap right_product(int rows, int cols);
  static SigmaMap custom(int state_dim, int driver_dim, std::string label,
                         MapFn fn, JacFn jacobian = nullptr);

  const std::string& label() const { return label_; }
  int state_dim() const { return state_dim_; }
  int driver_dim() const { return driver_dim_; }

  /// sigma at the given flattened state (state_dim x driver_dim).
  Eigen::MatrixXd operator()(const Eigen::VectorXd& state) const;

  /// d vec(sigma) / d state, analytic when available.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& state) const;
  /// Central-difference Jacobian with step h.
  Eigen::MatrixXd finite_difference_jacobian(const Eigen::VectorXd& state,
                                             double h = 1e-6) const;
  /// Largest entry-wise gap between the analytic and finite-difference
  /// Jacobians at the given state; 0 for maps without an analytic one.
  double jacobian_defect(const Eigen::VectorXd& state, double h = 1e-6) const;

private:
  SigmaMap() = default;

  std::string label_;
  int state_dim_ = 0;
  int driver_dim_ = 0;
  MapFn fn_;
  JacFn jac_;
};

}  // namespace levylab
