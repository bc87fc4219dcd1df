#include "levylab/solver.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "levylab/errors.hpp"

namespace levylab {

namespace {

Eigen::Map<const Eigen::MatrixXd> as_matrix(const Eigen::VectorXd& v, int r,
                                            int c) {
  if (int(v.size()) != r * c)
    throw std::invalid_argument("path value incompatible with its shape");
  return {v.data(), r, c};
}

int auto_substeps(double dt, double t_max) {
  return std::max(1, int(std::ceil(dt / (1e-3 * t_max))));
}

Eigen::VectorXd solve_coefficient(const Eigen::MatrixXd& sig,
                                  const Eigen::VectorXd& rhs,
                                  double condition_limit, double at_time) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      sig, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0) || s(0) / smin > condition_limit)
    throw ConditionError(
        "recover_driver: sigma too ill-conditioned to invert", at_time);
  return svd.solve(rhs);
}

void require_same_times(const PathSkeleton& a, const PathSkeleton& b,
                        const char* op) {
  if (a.times != b.times)
    throw GridMismatchError(std::string(op) +
                            ": paths must share their stored times");
}

}  // namespace

SolutionPath solve_sde(std::shared_ptr<const PathSkeleton> driver,
                       std::shared_ptr<const SigmaMap> sigma,
                       const Eigen::VectorXd& initial_state,
                       const SolveOptions& opt) {
  if (!driver || !sigma)
    throw std::invalid_argument("solve_sde: missing driver or sigma");
  const PathSkeleton& L = *driver;
  if (sigma->driver_dim() != L.dim())
    throw std::invalid_argument(
        "solve_sde: sigma driver dimension does not match the driver path");
  if (int(initial_state.size()) != sigma->state_dim())
    throw std::invalid_argument(
        "solve_sde: initial state dimension does not match sigma");
  if (L.size() == 0) throw std::invalid_argument("solve_sde: empty driver");

  const int n = sigma->state_dim();
  const double t_max = L.times.back();

  SolutionPath out;
  out.driver = driver;
  out.sigma = sigma;
  out.initial_state = initial_state;
  out.path.times = L.times;
  out.path.report = L.report;
  out.path.origin = initial_state;
  out.path.values.resize(n, long(L.size()));
  out.path.shape_rows = n;
  out.path.shape_cols = 1;
  out.path.seed_id = L.seed_id;
  out.path.piecewise_linear = false;

  Eigen::VectorXd x = initial_state;
  Eigen::VectorXd prev_driver = L.origin;
  double prev_t = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const Eigen::VectorXd d_cont = L.pre_value_at(i) - prev_driver;
    int steps = opt.substeps_per_interval;
    if (steps == 0)
      steps = L.piecewise_linear ? auto_substeps(L.times[i] - prev_t, t_max)
                                 : 1;
    if (!L.piecewise_linear) steps = 1;
    const Eigen::VectorXd slice = d_cont / double(steps);
    for (int k = 0; k < steps; ++k) x += (*sigma)(x)*slice;
    if (const JumpRecord* jump = L.jump_at(i)) {
      JumpRecord rec;
      rec.time_index = i;
      rec.pre_value = x;
      rec.delta = (*sigma)(x)*jump->delta;
      x = rec.pre_value + rec.delta;
      out.path.jumps.push_back(std::move(rec));
    }
    if (!x.allFinite())
      throw std::overflow_error("solve_sde: state became non-finite at t = " +
                                std::to_string(L.times[i]));
    out.path.values.col(long(i)) = x;
    prev_driver = L.value_at(i);
    prev_t = L.times[i];
  }
  return out;
}

PathSkeleton recover_driver(const SolutionPath& solution,
                            double condition_limit) {
  if (!solution.sigma || !solution.driver)
    throw std::invalid_argument("recover_driver: incomplete solution");
  const PathSkeleton& x = solution.path;
  const SigmaMap& sigma = *solution.sigma;
  const int m = sigma.driver_dim();

  PathSkeleton out;
  out.times = x.times;
  out.report = x.report;
  out.origin = Eigen::VectorXd::Zero(m);
  out.values.resize(m, long(x.size()));
  out.shape_rows = solution.driver->shape_rows;
  out.shape_cols = solution.driver->shape_cols;
  out.seed_id = x.seed_id;
  out.piecewise_linear = solution.driver->piecewise_linear;

  Eigen::VectorXd level = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd prev_state = x.origin;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Eigen::VectorXd pre = x.pre_value_at(i);
    level += solve_coefficient(sigma(prev_state), pre - prev_state,
                               condition_limit, x.times[i]);
    if (const JumpRecord* jump = x.jump_at(i)) {
      JumpRecord rec;
      rec.time_index = i;
      rec.pre_value = level;
      rec.delta = solve_coefficient(sigma(jump->pre_value), jump->delta,
                                    condition_limit, x.times[i]);
      level = rec.pre_value + rec.delta;
      out.jumps.push_back(std::move(rec));
    }
    out.values.col(long(i)) = level;
    prev_state = x.value_at(i);
  }
  return out;
}

StochasticExponential stochastic_exponential(
    std::shared_ptr<const PathSkeleton> driver, ExponentialSide side,
    const SolveOptions& opt) {
  if (!driver)
    throw std::invalid_argument("stochastic_exponential: missing driver");
  const int d = driver->shape_rows;
  if (d < 1 || driver->shape_cols != d)
    throw std::invalid_argument(
        "stochastic_exponential: driver must be a square matrix path");

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  auto sigma = std::make_shared<SigmaMap>(side == ExponentialSide::Left
                                              ? SigmaMap::left_product(d, d)
                                              : SigmaMap::right_product(d, d));
  const Eigen::VectorXd z0 = Eigen::Map<const Eigen::VectorXd>(eye.data(), d * d);

  StochasticExponential out;
  out.solution = solve_sde(driver, sigma, z0, opt);
  out.solution.path.shape_rows = d;
  out.solution.path.shape_cols = d;
  for (const JumpRecord& jump : driver->jumps) {
    const double det = (eye + as_matrix(jump.delta, d, d)).determinant();
    out.min_jump_determinant =
        std::min(out.min_jump_determinant, std::abs(det));
    if (det == 0.0) out.invertible = false;
  }
  return out;
}

PathSkeleton stochastic_integral_left(const PathSkeleton& y,
                                      const PathSkeleton& x) {
  require_same_times(y, x, "stochastic_integral_left");
  if (y.shape_cols != x.shape_rows)
    throw std::invalid_argument(
        "stochastic_integral_left: integrand columns must match "
        "differential rows");
  const int r = y.shape_rows, c = x.shape_cols, mid = x.shape_rows;

  PathSkeleton out;
  out.times = x.times;
  out.report = x.report;
  out.origin = Eigen::VectorXd::Zero(r * c);
  out.values.resize(r * c, long(x.size()));
  out.shape_rows = r;
  out.shape_cols = c;
  out.seed_id = x.seed_id;
  out.piecewise_linear = false;

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(r, c);
  Eigen::VectorXd prev_y = y.origin, prev_x = x.origin;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Eigen::VectorXd x_pre = x.pre_value_at(i);
    acc += as_matrix(prev_y, r, mid) *
           as_matrix(Eigen::VectorXd(x_pre - prev_x), mid, c);
    if (const JumpRecord* jump = x.jump_at(i)) {
      JumpRecord rec;
      rec.time_index = i;
      rec.pre_value = Eigen::Map<const Eigen::VectorXd>(acc.data(), r * c);
      const Eigen::MatrixXd d = as_matrix(y.pre_value_at(i), r, mid) *
                                as_matrix(jump->delta, mid, c);
      rec.delta = Eigen::Map<const Eigen::VectorXd>(d.data(), r * c);
      acc = Eigen::Map<const Eigen::MatrixXd>(
          Eigen::VectorXd(rec.pre_value + rec.delta).data(), r, c);
      out.jumps.push_back(std::move(rec));
    }
    out.values.col(long(i)) = Eigen::Map<const Eigen::VectorXd>(acc.data(), r * c);
    prev_y = y.value_at(i);
    prev_x = x.value_at(i);
  }
  return out;
}

PathSkeleton stochastic_integral_right(const PathSkeleton& y,
                                       const PathSkeleton& x) {
  require_same_times(y, x, "stochastic_integral_right");
  if (x.shape_cols != y.shape_rows)
    throw std::invalid_argument(
        "stochastic_integral_right: differential columns must match "
        "integrand rows");
  const int r = x.shape_rows, c = y.shape_cols, mid = y.shape_rows;

  PathSkeleton out;
  out.times = x.times;
  out.report = x.report;
  out.origin = Eigen::VectorXd::Zero(r * c);
  out.values.resize(r * c, long(x.size()));
  out.shape_rows = r;
  out.shape_cols = c;
  out.seed_id = x.seed_id;
  out.piecewise_linear = false;

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(r, c);
  Eigen::VectorXd prev_y = y.origin, prev_x = x.origin;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Eigen::VectorXd x_pre = x.pre_value_at(i);
    acc += as_matrix(Eigen::VectorXd(x_pre - prev_x), r, mid) *
           as_matrix(prev_y, mid, c);
    if (const JumpRecord* jump = x.jump_at(i)) {
      JumpRecord rec;
      rec.time_index = i;
      rec.pre_value = Eigen::Map<const Eigen::VectorXd>(acc.data(), r * c);
      const Eigen::MatrixXd d = as_matrix(jump->delta, r, mid) *
                                as_matrix(y.pre_value_at(i), mid, c);
      rec.delta = Eigen::Map<const Eigen::VectorXd>(d.data(), r * c);
      acc = Eigen::Map<const Eigen::MatrixXd>(
          Eigen::VectorXd(rec.pre_value + rec.delta).data(), r, c);
      out.jumps.push_back(std::move(rec));
    }
    out.values.col(long(i)) = Eigen::Map<const Eigen::VectorXd>(acc.data(), r * c);
    prev_y = y.value_at(i);
    prev_x = x.value_at(i);
  }
  return out;
}

PathSkeleton realized_covariation(const PathSkeleton& x,
                                  const PathSkeleton& y) {
  require_same_times(x, y, "realized_covariation");
  if (x.shape_cols != y.shape_rows)
    throw std::invalid_argument(
        "realized_covariation: left factor columns must match right factor "
        "rows");
  const int r = x.shape_rows, c = y.shape_cols, mid = y.shape_rows;

  PathSkeleton out;
  out.times = x.times;
  out.report = x.report;
  out.origin = Eigen::VectorXd::Zero(r * c);
  out.values.resize(r * c, long(x.size()));
  out.shape_rows = r;
  out.shape_cols = c;
  out.seed_id = x.seed_id;
  out.piecewise_linear = false;

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(r, c);
  Eigen::VectorXd prev_x = x.origin, prev_y = y.origin;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Eigen::VectorXd x_pre = x.pre_value_at(i);
    const Eigen::VectorXd y_pre = y.pre_value_at(i);
    acc += as_matrix(Eigen::VectorXd(x_pre - prev_x), r, mid) *
           as_matrix(Eigen::VectorXd(y_pre - prev_y), mid, c);
    const JumpRecord* jx = x.jump_at(i);
    const JumpRecord* jy = y.jump_at(i);
    if (jx || jy) {
      const Eigen::VectorXd dx =
          jx ? jx->delta : Eigen::VectorXd::Zero(x.dim()).eval();
      const Eigen::VectorXd dy =
          jy ? jy->delta : Eigen::VectorXd::Zero(y.dim()).eval();
      JumpRecord rec;
      rec.time_index = i;
      rec.pre_value = Eigen::Map<const Eigen::VectorXd>(acc.data(), r * c);
      const Eigen::MatrixXd d = as_matrix(dx, r, mid) * as_matrix(dy, mid, c);
      rec.delta = Eigen::Map<const Eigen::VectorXd>(d.data(), r * c);
      acc = Eigen::Map<const Eigen::MatrixXd>(
          Eigen::VectorXd(rec.pre_value + rec.delta).data(), r, c);
      out.jumps.push_back(std::move(rec));
    }
    out.values.col(long(i)) = Eigen::Map<const Eigen::VectorXd>(acc.data(), r * c);
    prev_x = x.value_at(i);
    prev_y = y.value_at(i);
  }
  return out;
}

double integration_by_parts_residual(const PathSkeleton& x,
                                     const PathSkeleton& y) {
  const PathSkeleton left = stochastic_integral_left(x, y);
  const PathSkeleton right = stochastic_integral_right(y, x);
  const PathSkeleton cov = realized_covariation(x, y);
  const int r = x.shape_rows, c = y.shape_cols, mid = y.shape_rows;
  const Eigen::MatrixXd base =
      as_matrix(x.origin, r, mid) * as_matrix(y.origin, mid, c);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Eigen::MatrixXd product =
        x.matrix_at(i) * y.matrix_at(i) - base - left.matrix_at(i) -
        right.matrix_at(i) - cov.matrix_at(i);
    worst = std::max(worst, product.norm());
  }
  return worst;
}

std::vector<JumpTaylorResidual> ito_jump_residual(const SolutionPath& solution) {
  if (!solution.sigma)
    throw std::invalid_argument("ito_jump_residual: incomplete solution");
  const SigmaMap& sigma = *solution.sigma;
  const int n = sigma.state_dim(), d = sigma.driver_dim();

  std::vector<JumpTaylorResidual> out;
  out.reserve(solution.path.jumps.size());
  for (const JumpRecord& jump : solution.path.jumps) {
    const Eigen::VectorXd post = jump.pre_value + jump.delta;
    const Eigen::VectorXd linear = sigma.jacobian(jump.pre_value) * jump.delta;
    JumpTaylorResidual entry;
    entry.time_index = jump.time_index;
    entry.residual =
        sigma(post) - sigma(jump.pre_value) - as_matrix(linear, n, d);
    const double denom = jump.delta.squaredNorm();
    entry.ratio = denom > 0.0 ? entry.residual.norm() / denom : 0.0;
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace levylab
