#include "levylab/sigma_map.hpp"

#include <cmath>
#include <stdexcept>

#include "levylab/rng.hpp"

namespace levylab {

SigmaMap SigmaMap::constant(Eigen::MatrixXd value) {
  SigmaMap m;
  m.label_ = "constant";
  m.state_dim_ = int(value.rows());
  m.driver_dim_ = int(value.cols());
  const int n = m.state_dim_, d = m.driver_dim_;
  m.fn_ = [value = std::move(value)](const Eigen::VectorXd&) { return value; };
  m.jac_ = [n, d](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Zero(n * d, n).eval();
  };
  return m;
}

SigmaMap SigmaMap::diagonal(Eigen::VectorXd coefficients) {
  Eigen::MatrixXd value = coefficients.asDiagonal();
  SigmaMap m = constant(std::move(value));
  m.label_ = "diagonal";
  return m;
}

SigmaMap SigmaMap::affine(Eigen::MatrixXd intercept,
                          std::vector<Eigen::MatrixXd> slopes) {
  const int n = int(intercept.rows()), d = int(intercept.cols());
  if (int(slopes.size()) != n)
    throw std::invalid_argument("SigmaMap: need one slope per state entry");
  for (const auto& s : slopes)
    if (s.rows() != n || s.cols() != d)
      throw std::invalid_argument("SigmaMap: slope shape mismatch");
  SigmaMap m;
  m.label_ = "affine";
  m.state_dim_ = n;
  m.driver_dim_ = d;
  m.fn_ = [intercept = std::move(intercept),
           slopes](const Eigen::VectorXd& x) {
    Eigen::MatrixXd out = intercept;
    for (int i = 0; i < int(slopes.size()); ++i) out += x(i) * slopes[i];
    return out;
  };
  m.jac_ = [n, d, slopes](const Eigen::VectorXd&) {
    Eigen::MatrixXd jac(n * d, n);
    for (int i = 0; i < n; ++i)
      jac.col(i) = Eigen::Map<const Eigen::VectorXd>(slopes[i].data(), n * d);
    return jac;
  };
  return m;
}

SigmaMap SigmaMap::scalar_sinusoid(double a, double b, double c, double d) {
  SigmaMap m;
  m.label_ = "scalar_sinusoid";
  m.state_dim_ = 1;
  m.driver_dim_ = 1;
  m.fn_ = [a, b, c, d](const Eigen::VectorXd& x) {
    Eigen::MatrixXd out(1, 1);
    out(0, 0) = a + b * std::sin(x(0)) + c * std::cos(x(0)) + d * x(0);
    return out;
  };
  m.jac_ = [b, c, d](const Eigen::VectorXd& x) {
    Eigen::MatrixXd jac(1, 1);
    jac(0, 0) = b * std::cos(x(0)) - c * std::sin(x(0)) + d;
    return jac;
  };
  return m;
}

SigmaMap SigmaMap::left_product(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("SigmaMap: shape must be positive");
  SigmaMap m;
  m.label_ = "left_product";
  m.state_dim_ = rows * cols;
  m.driver_dim_ = cols * cols;
  m.fn_ = [rows, cols](const Eigen::VectorXd& x) {
    Eigen::Map<const Eigen::MatrixXd> X(x.data(), rows, cols);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows * cols, cols * cols);
    for (int k = 0; k < cols; ++k)
      out.block(k * rows, k * cols, rows, cols) = X;
    return out;
  };
  m.jac_ = [rows, cols](const Eigen::VectorXd&) {
    // vec(sigma) entry ((i + k rows) + (j + k' cols) * rows * cols) depends
    // on state entry (i + j rows) with unit coefficient when k == k'.
    const int n = rows * cols, d = cols * cols;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n * d, n);
    for (int k = 0; k < cols; ++k)
      for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
          const long row = (i + k * rows) + long(j + k * cols) * n;
          jac(row, i + j * rows) = 1.0;
        }
    return jac;
  };
  return m;
}

SigmaMap SigmaMap::right_product(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("SigmaMap: shape must be positive");
  SigmaMap m;
  m.label_ = "right_product";
  m.state_dim_ = rows * cols;
  m.driver_dim_ = rows * rows;
  m.fn_ = [rows, cols](const Eigen::VectorXd& x) {
    Eigen::Map<const Eigen::MatrixXd> X(x.data(), rows, cols);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows * cols, rows * rows);
    for (int k = 0; k < cols; ++k)
      for (int j = 0; j < rows; ++j)
        out.block(k * rows, j * rows, rows, rows) =
            X(j, k) * Eigen::MatrixXd::Identity(rows, rows);
    return out;
  };
  m.jac_ = [rows, cols](const Eigen::VectorXd&) {
    const int n = rows * cols, d = rows * rows;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n * d, n);
    for (int k = 0; k < cols; ++k)
      for (int j = 0; j < rows; ++j)
        for (int i = 0; i < rows; ++i) {
          const long row = (i + k * rows) + long(i + j * rows) * n;
          jac(row, j + k * rows) = 1.0;
        }
    return jac;
  };
  return m;
}

SigmaMap SigmaMap::custom(int state_dim, int driver_dim, std::string label,
                          MapFn fn, JacFn jacobian) {
  if (state_dim < 1 || driver_dim < 1)
    throw std::invalid_argument("SigmaMap: dimensions must be positive");
  if (!fn) throw std::invalid_argument("SigmaMap: missing callable");
  SigmaMap m;
  m.label_ = std::move(label);
  m.state_dim_ = state_dim;
  m.driver_dim_ = driver_dim;
  m.fn_ = std::move(fn);
  m.jac_ = std::move(jacobian);
  if (m.jac_) {
    // A supplied Jacobian must agree with finite differences of the map;
    // probing at construction catches transposed or misindexed derivatives
    // before they silently corrupt recover_driver or residual checks.
    RngStream probe(0x51C3A9, 0, kReservedSubstreamBase + 2);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd x(state_dim);
      for (int i = 0; i < state_dim; ++i) x(i) = 2.0 * probe.uniform01() - 1.0;
      const Eigen::MatrixXd analytic = m.jac_(x);
      const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
      const double gap = (analytic - m.finite_difference_jacobian(x))
                             .cwiseAbs()
                             .maxCoeff();
      if (gap > 1e-5 * scale)
        throw std::invalid_argument(
            "SigmaMap: supplied jacobian disagrees with finite differences");
    }
  }
  return m;
}

Eigen::MatrixXd SigmaMap::operator()(const Eigen::VectorXd& state) const {
  if (int(state.size()) != state_dim_)
    throw std::invalid_argument("SigmaMap: state dimension mismatch");
  Eigen::MatrixXd out = fn_(state);
  if (int(out.rows()) != state_dim_ || int(out.cols()) != driver_dim_)
    throw std::logic_error("SigmaMap: callable returned a wrong shape");
  return out;
}

Eigen::MatrixXd SigmaMap::jacobian(const Eigen::VectorXd& state) const {
  if (jac_) return jac_(state);
  return finite_difference_jacobian(state);
}

Eigen::MatrixXd SigmaMap::finite_difference_jacobian(
    const Eigen::VectorXd& state, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("SigmaMap: h must be positive");
  const int n = state_dim_, d = driver_dim_;
  Eigen::MatrixXd jac(n * d, n);
  Eigen::VectorXd x = state;
  for (int i = 0; i < n; ++i) {
    x(i) = state(i) + h;
    const Eigen::MatrixXd up = (*this)(x);
    x(i) = state(i) - h;
    const Eigen::MatrixXd dn = (*this)(x);
    x(i) = state(i);
    const Eigen::MatrixXd diff = (up - dn) / (2.0 * h);
    jac.col(i) = Eigen::Map<const Eigen::VectorXd>(diff.data(), n * d);
  }
  return jac;
}

double SigmaMap::jacobian_defect(const Eigen::VectorXd& state, double h) const {
  if (!jac_) return 0.0;
  return (jac_(state) - finite_difference_jacobian(state, h))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace levylab
